//! In-memory corpus: news tweets, comments, 5-point ratings, and the
//! offensive-only Feedback Database, with the indexes the models query.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// UTC seconds since the Unix epoch.
pub type Timestamp = i64;

/// Ratings at or above this value count as "offensive".
pub const OFFENSIVE_MIN_RATING: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsTweet {
    pub id: String,
    pub text: String,
    pub posted_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub id: String,
    pub news_id: String,
    pub commenter_id: String,
    pub text: String,
    pub posted_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Commenter {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Reader {
    pub id: String,
}

/// A full 5-point rating. Labels for training and evaluation come from these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub reader_id: String,
    pub comment_id: String,
    pub rating: u8,
    pub rated_at: Timestamp,
}

impl RatingRecord {
    pub fn label(&self) -> Result<Label> {
        binarize(i64::from(self.rating))
    }
}

/// An "offensive" mark. The Feedback Database never holds negative ratings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackRecord {
    pub reader_id: String,
    pub comment_id: String,
    pub rated_at: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    NotOffensive = 0,
    Offensive = 1,
}

impl Label {
    pub fn is_offensive(self) -> bool {
        self == Label::Offensive
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Label::Offensive => 1.0,
            Label::NotOffensive => 0.0,
        }
    }
}

impl From<bool> for Label {
    fn from(offensive: bool) -> Self {
        if offensive {
            Label::Offensive
        } else {
            Label::NotOffensive
        }
    }
}

/// Maps a 5-point response to a binary label: 4 or 5 is offensive.
pub fn binarize(rating: i64) -> Result<Label> {
    if !(1..=5).contains(&rating) {
        return Err(Error::RatingOutOfRange(rating));
    }
    Ok(Label::from(rating >= i64::from(OFFENSIVE_MIN_RATING)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StoreCounts {
    pub news: usize,
    pub comments: usize,
    pub commenters: usize,
    pub readers: usize,
    pub ratings: usize,
    pub feedback: usize,
}

/// Chronological train/validation/test partition of ratings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSplit {
    pub train: Vec<RatingRecord>,
    pub validation: Vec<RatingRecord>,
    pub test: Vec<RatingRecord>,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusStore {
    news: BTreeMap<String, NewsTweet>,
    comments: BTreeMap<String, Comment>,
    // commenter id -> comment ids ordered by (posted_at, id)
    by_commenter: BTreeMap<String, Vec<String>>,
    // all comment ids ordered by (posted_at, id)
    timeline: Vec<String>,
    readers: BTreeSet<String>,
    ratings: Vec<RatingRecord>,
    rating_index: BTreeMap<(String, String), usize>,
    // reader id -> feedback ordered by (rated_at, comment_id)
    feedback: BTreeMap<String, Vec<FeedbackRecord>>,
    feedback_total: usize,
}

impl CorpusStore {
    /// Builds the store and checks referential integrity.
    pub fn build(
        news: Vec<NewsTweet>,
        comments: Vec<Comment>,
        ratings: Vec<RatingRecord>,
        feedback: Vec<FeedbackRecord>,
    ) -> Result<Self> {
        let mut store = CorpusStore::default();

        for n in news {
            require_id("news", &n.id)?;
            if n.text.is_empty() {
                return Err(Error::InvalidRecord(format!("news `{}` has empty text", n.id)));
            }
            if store.news.contains_key(&n.id) {
                return Err(Error::DuplicateId { kind: "news", id: n.id });
            }
            store.news.insert(n.id.clone(), n);
        }

        for c in comments {
            require_id("comment", &c.id)?;
            require_id("commenter", &c.commenter_id)?;
            if !store.news.contains_key(&c.news_id) {
                return Err(Error::DanglingReference {
                    kind: "comment",
                    id: c.id,
                    target: "news",
                    target_id: c.news_id,
                });
            }
            if store.comments.contains_key(&c.id) {
                return Err(Error::DuplicateId { kind: "comment", id: c.id });
            }
            store.by_commenter.entry(c.commenter_id.clone()).or_default().push(c.id.clone());
            store.timeline.push(c.id.clone());
            store.comments.insert(c.id.clone(), c);
        }
        let comments = &store.comments;
        let key = |id: &String| (comments[id].posted_at, id.clone());
        store.timeline.sort_by_key(key);
        for ids in store.by_commenter.values_mut() {
            ids.sort_by_key(key);
        }

        for r in ratings {
            store.insert_rating(r)?;
        }
        for f in feedback {
            if !store.add_feedback(f.clone())? {
                return Err(Error::DuplicateId { kind: "feedback", id: format!("{}/{}", f.reader_id, f.comment_id) });
            }
        }
        Ok(store)
    }

    fn insert_rating(&mut self, r: RatingRecord) -> Result<()> {
        require_id("reader", &r.reader_id)?;
        binarize(i64::from(r.rating))?;
        if !self.comments.contains_key(&r.comment_id) {
            return Err(Error::DanglingReference {
                kind: "rating",
                id: r.reader_id,
                target: "comment",
                target_id: r.comment_id,
            });
        }
        let key = (r.reader_id.clone(), r.comment_id.clone());
        if self.rating_index.contains_key(&key) {
            return Err(Error::DuplicateId { kind: "rating", id: format!("{}/{}", key.0, key.1) });
        }
        if let Some(fb) = self.feedback.get(&r.reader_id) {
            if r.rating < OFFENSIVE_MIN_RATING && fb.iter().any(|f| f.comment_id == r.comment_id) {
                return Err(Error::FeedbackConflict {
                    reader_id: r.reader_id,
                    comment_id: r.comment_id,
                    rating: r.rating,
                });
            }
        }
        self.readers.insert(r.reader_id.clone());
        self.rating_index.insert(key, self.ratings.len());
        self.ratings.push(r);
        Ok(())
    }

    /// Appends an offensive mark. Returns `false` when the (reader, comment)
    /// pair is already recorded, leaving the store unchanged.
    pub fn add_feedback(&mut self, record: FeedbackRecord) -> Result<bool> {
        require_id("reader", &record.reader_id)?;
        if !self.comments.contains_key(&record.comment_id) {
            return Err(Error::DanglingReference {
                kind: "feedback",
                id: record.reader_id,
                target: "comment",
                target_id: record.comment_id,
            });
        }
        if let Some(r) = self.rating(&record.reader_id, &record.comment_id) {
            if r.rating < OFFENSIVE_MIN_RATING {
                return Err(Error::FeedbackConflict {
                    reader_id: record.reader_id,
                    comment_id: record.comment_id,
                    rating: r.rating,
                });
            }
        }
        let list = self.feedback.entry(record.reader_id.clone()).or_default();
        if list.iter().any(|f| f.comment_id == record.comment_id) {
            return Ok(false);
        }
        let pos = list
            .partition_point(|f| (f.rated_at, f.comment_id.as_str()) <= (record.rated_at, record.comment_id.as_str()));
        self.readers.insert(record.reader_id.clone());
        list.insert(pos, record);
        self.feedback_total += 1;
        Ok(true)
    }

    pub fn counts(&self) -> StoreCounts {
        StoreCounts {
            news: self.news.len(),
            comments: self.comments.len(),
            commenters: self.by_commenter.len(),
            readers: self.readers.len(),
            ratings: self.ratings.len(),
            feedback: self.feedback_total,
        }
    }

    pub fn news(&self, id: &str) -> Result<&NewsTweet> {
        self.news.get(id).ok_or_else(|| unknown("news", id))
    }

    pub fn comment(&self, id: &str) -> Result<&Comment> {
        self.comments.get(id).ok_or_else(|| unknown("comment", id))
    }

    /// The news tweet a comment replies to.
    pub fn news_of(&self, comment: &Comment) -> Result<&NewsTweet> {
        self.news(&comment.news_id)
    }

    pub fn rating(&self, reader_id: &str, comment_id: &str) -> Option<&RatingRecord> {
        self.rating_index.get(&(String::from(reader_id), String::from(comment_id))).map(|&i| &self.ratings[i])
    }

    pub fn ratings(&self) -> &[RatingRecord] {
        &self.ratings
    }

    pub fn all_news(&self) -> impl Iterator<Item = &NewsTweet> {
        self.news.values()
    }

    /// Comments in ascending `(posted_at, id)` order.
    pub fn comments_chronological(&self) -> impl DoubleEndedIterator<Item = &Comment> {
        self.timeline.iter().map(move |id| &self.comments[id])
    }

    /// The `limit` most recent comments, newest first.
    pub fn most_recent_comments(&self, limit: usize) -> Vec<&Comment> {
        self.comments_chronological().rev().take(limit).collect()
    }

    pub fn commenters(&self) -> impl Iterator<Item = Commenter> + '_ {
        self.by_commenter.keys().map(|id| Commenter { id: id.clone() })
    }

    pub fn readers(&self) -> impl Iterator<Item = Reader> + '_ {
        self.readers.iter().map(|id| Reader { id: id.clone() })
    }

    pub fn has_reader(&self, reader_id: &str) -> bool {
        self.readers.contains(reader_id)
    }

    pub fn has_commenter(&self, commenter_id: &str) -> bool {
        self.by_commenter.contains_key(commenter_id)
    }

    /// Comments written by `commenter_id`, oldest first.
    pub fn comments_by(&self, commenter_id: &str) -> Vec<&Comment> {
        self.by_commenter
            .get(commenter_id)
            .map(|ids| ids.iter().map(|id| &self.comments[id]).collect())
            .unwrap_or_default()
    }

    /// The `n` most recent comments of a commenter, oldest of them first.
    pub fn recent_comments_by(&self, commenter_id: &str, n: usize) -> Vec<&Comment> {
        let all = self.comments_by(commenter_id);
        let skip = all.len().saturating_sub(n);
        all[skip..].to_vec()
    }

    pub fn feedback_count(&self, reader_id: &str) -> usize {
        self.feedback.get(reader_id).map_or(0, Vec::len)
    }

    pub fn feedback_records(&self, reader_id: &str) -> &[FeedbackRecord] {
        self.feedback.get(reader_id).map_or(&[], Vec::as_slice)
    }

    pub fn all_feedback(&self) -> impl Iterator<Item = &FeedbackRecord> {
        self.feedback.values().flatten()
    }

    /// The reader's feedback comments, at most `cap`, taking the earliest by
    /// `rated_at` with ties broken by comment id.
    pub fn offensive_feedback(&self, reader_id: &str, cap: usize) -> Result<Vec<&Comment>> {
        if !self.has_reader(reader_id) {
            return Err(unknown("reader", reader_id));
        }
        Ok(self.feedback_records(reader_id).iter().take(cap).map(|f| &self.comments[&f.comment_id]).collect())
    }

    /// Partitions ratings by the posted time of the rated comment:
    /// `train < b1 <= validation < b2 <= test`.
    pub fn split_by_time(&self, ratings: &[RatingRecord], boundaries: (Timestamp, Timestamp)) -> Result<TimeSplit> {
        let (b1, b2) = boundaries;
        if b1 >= b2 {
            return Err(Error::InvalidConfig(format!(
                "split boundaries must be strictly increasing, got ({b1}, {b2})"
            )));
        }
        let mut split = TimeSplit::default();
        for r in ratings {
            let t = self.comment(&r.comment_id)?.posted_at;
            let part = if t < b1 {
                &mut split.train
            } else if t < b2 {
                &mut split.validation
            } else {
                &mut split.test
            };
            part.push(r.clone());
        }
        Ok(split)
    }

    /// Offensive feedback implied by ratings on comments posted before
    /// `window_end`, for corpora shipped without a feedback file.
    pub fn feedback_from_ratings(&self, window_end: Timestamp) -> Vec<FeedbackRecord> {
        self.ratings
            .iter()
            .filter(|r| r.rating >= OFFENSIVE_MIN_RATING)
            .filter(|r| self.comments[&r.comment_id].posted_at < window_end)
            .map(|r| FeedbackRecord {
                reader_id: r.reader_id.clone(),
                comment_id: r.comment_id.clone(),
                rated_at: r.rated_at,
            })
            .collect()
    }

    /// Earliest and latest comment timestamps.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        let first = self.timeline.first()?;
        let last = self.timeline.last()?;
        Some((self.comments[first].posted_at, self.comments[last].posted_at))
    }
}

fn require_id(kind: &'static str, id: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::InvalidRecord(format!("{kind} id is empty")));
    }
    Ok(())
}

fn unknown(kind: &'static str, id: &str) -> Error {
    Error::Unknown { kind, id: String::from(id) }
}
