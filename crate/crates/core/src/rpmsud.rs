//! Suspicious-usage detection over an event stream.
//!
//! Events are cut into consecutive mining cycles of fixed duration. Each
//! cycle's events are mined on their own for rare item-sets and the queue is
//! emptied. After `cycles` cycles (one mining window) every pattern that was
//! rare in at least `cycles` of them raises an alert, the window's recurrence
//! table is appended to a JSON-lines store, and the table is cleared.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::aranim::{self, MiningConfig};
use crate::class::Emit;
use crate::database::{DatabaseBuilder, ItemDictionary, DEFAULT_MAX_ITEMS};
use crate::error::{Error, Result};
use crate::itemset::{ItemSet, Support};

/// One observed event; its items form one transaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub timestamp: u64,
    /// Sorted and deduplicated, never empty.
    pub items: Vec<String>,
}

impl Event {
    pub fn new<I, S>(timestamp: u64, items: I) -> Option<Event>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut items: Vec<String> = items.into_iter().map(Into::into).collect();
        items.sort();
        items.dedup();
        if items.is_empty() {
            None
        } else {
            Some(Event { timestamp, items })
        }
    }

    /// Parses `<timestamp_ms> <item> <item> ...`. Blank and `#` lines give
    /// `Ok(None)`; a bad timestamp or a line without items is an error.
    pub fn parse_line(line: &str) -> std::result::Result<Option<Event>, String> {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return Ok(None);
        }
        let mut tokens = trimmed.split_whitespace();
        let ts = tokens.next().unwrap_or_default();
        let timestamp: u64 = ts.parse().map_err(|_| format!("bad timestamp '{ts}'"))?;
        match Event::new(timestamp, tokens) {
            Some(event) => Ok(Some(event)),
            None => Err("event has no items".to_string()),
        }
    }
}

/// Events read from a replay file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    pub events: Vec<Event>,
    /// Malformed lines that were skipped, as (line number, reason).
    pub skipped: Vec<(usize, String)>,
}

/// Reads an event file under the replay contract: malformed lines are
/// skipped and counted, timestamps going backwards abort.
pub fn read_events(text: &str) -> Result<EventLog> {
    let mut log = EventLog::default();
    let mut previous: Option<u64> = None;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        match Event::parse_line(line) {
            Ok(None) => {}
            Ok(Some(event)) => {
                if let Some(prev) = previous {
                    if event.timestamp < prev {
                        return Err(Error::NonMonotoneTimestamp {
                            line: line_no,
                            timestamp: event.timestamp,
                            previous: prev,
                        });
                    }
                }
                previous = Some(event.timestamp);
                log.events.push(event);
            }
            Err(reason) => log.skipped.push((line_no, reason)),
        }
    }
    Ok(log)
}

/// Pending events. Producers append from any thread; the miner takes every
/// event of a finished cycle in one locked step.
#[derive(Debug, Default)]
pub struct EventQueue {
    events: Mutex<Vec<Event>>,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ingest(&self, event: Event) {
        self.events.lock().unwrap().push(event);
    }

    /// Removes and returns every event stamped before `end`, in arrival order.
    pub fn take_before(&self, end: u64) -> Vec<Event> {
        let mut events = self.events.lock().unwrap();
        let (taken, rest): (Vec<Event>, Vec<Event>) =
            events.drain(..).partition(|e| e.timestamp < end);
        *events = rest;
        taken
    }

    pub fn earliest_timestamp(&self) -> Option<u64> {
        self.events
            .lock()
            .unwrap()
            .iter()
            .map(|e| e.timestamp)
            .min()
    }

    pub fn len(&self) -> usize {
        self.events.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl From<Vec<Event>> for EventQueue {
    fn from(events: Vec<Event>) -> Self {
        EventQueue {
            events: Mutex::new(events),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventWindowConfig {
    /// Maximum support threshold applied to each cycle.
    pub sigma: usize,
    /// Mining cycles per window.
    pub cycles: usize,
    /// Cycle length in milliseconds.
    pub duration_ms: u64,
    /// JSON-lines store; `None` keeps records in memory only.
    pub store_path: Option<PathBuf>,
    /// Item cap for the database of a single cycle.
    pub max_items: usize,
}

impl EventWindowConfig {
    pub fn new(sigma: usize, cycles: usize, duration_ms: u64) -> Self {
        EventWindowConfig {
            sigma,
            cycles,
            duration_ms,
            store_path: None,
            max_items: DEFAULT_MAX_ITEMS,
        }
    }

    pub fn with_store(mut self, path: impl Into<PathBuf>) -> Self {
        self.store_path = Some(path.into());
        self
    }

    pub fn with_max_items(mut self, max_items: usize) -> Self {
        self.max_items = max_items;
        self
    }

    /// Window length; always exactly `duration_ms * cycles`.
    pub fn window_ms(&self) -> u64 {
        self.duration_ms * self.cycles as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma == 0 {
            return Err(Error::InvalidConfig(
                "max support must be at least 1".into(),
            ));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidConfig("cycles must be at least 1".into()));
        }
        if self.duration_ms == 0 {
            return Err(Error::InvalidConfig(
                "cycle duration must be at least 1 ms".into(),
            ));
        }
        if self.duration_ms.checked_mul(self.cycles as u64).is_none() {
            return Err(Error::InvalidConfig("window length overflows".into()));
        }
        Ok(())
    }
}

/// Time source driving cycle boundaries.
pub trait Clock {
    fn now(&self) -> u64;
    /// Blocks until `now() >= t`.
    fn wait_until(&mut self, t: u64);
}

/// Clock for replays: waiting just moves time forward.
#[derive(Clone, Copy, Debug, Default)]
pub struct VirtualClock {
    now: u64,
}

impl VirtualClock {
    pub fn starting_at(now: u64) -> Self {
        VirtualClock { now }
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> u64 {
        self.now
    }

    fn wait_until(&mut self, t: u64) {
        self.now = self.now.max(t);
    }
}

/// Milliseconds since the Unix epoch, sleeping for real.
#[derive(Clone, Copy, Debug, Default)]
pub struct WallClock;

impl Clock for WallClock {
    fn now(&self) -> u64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0)
    }

    fn wait_until(&mut self, t: u64) {
        loop {
            let now = self.now();
            if now >= t {
                return;
            }
            thread::sleep(Duration::from_millis(t - now));
        }
    }
}

/// A pattern seen rare in at least one cycle of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternRecurrence {
    /// Over the window dictionary of the report that holds it.
    pub itemset: ItemSet,
    pub labels: Vec<String>,
    /// Cycles whose mining output held this pattern as rare.
    pub cycles_detected: usize,
    pub last_support: Support,
    /// Support in each cycle where it was rare, `None` elsewhere.
    pub supports_per_cycle: Vec<Option<Support>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alert {
    pub window_start: u64,
    pub itemset: ItemSet,
    pub labels: Vec<String>,
    pub cycles_detected: usize,
    pub supports_per_cycle: Vec<Support>,
}

impl Alert {
    /// `ALERT window=<start> pattern=<labels> cycles=<n>`
    pub fn to_line(&self) -> String {
        format!(
            "ALERT window={} pattern={} cycles={}",
            self.window_start,
            self.labels.join(" "),
            self.cycles_detected
        )
    }
}

/// Receives alerts as a window closes.
pub trait AlertSink {
    fn alert(&mut self, alert: &Alert);
}

impl AlertSink for Vec<Alert> {
    fn alert(&mut self, alert: &Alert) {
        self.push(alert.clone());
    }
}

impl<F: FnMut(&Alert)> AlertSink for F {
    fn alert(&mut self, alert: &Alert) {
        self(alert)
    }
}

/// One persisted recurrence record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StoreRecord {
    pub window_start: u64,
    pub itemset: Vec<String>,
    pub cycles_detected: usize,
    pub alerted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSummary {
    pub start: u64,
    pub transactions: usize,
    pub rare_patterns: usize,
}

#[derive(Clone, Debug)]
pub struct WindowReport {
    pub window_start: u64,
    pub cycles: Vec<CycleSummary>,
    /// Labels of every pattern rare in some cycle; the recurrences' item-sets
    /// are over this dictionary.
    pub dictionary: ItemDictionary,
    /// Sorted by cardinality then labels.
    pub recurrences: Vec<PatternRecurrence>,
    pub alerts: Vec<Alert>,
}

impl WindowReport {
    pub fn store_records(&self, cycles: usize) -> Vec<StoreRecord> {
        self.recurrences
            .iter()
            .map(|r| StoreRecord {
                window_start: self.window_start,
                itemset: r.labels.clone(),
                cycles_detected: r.cycles_detected,
                alerted: r.cycles_detected >= cycles,
            })
            .collect()
    }
}

/// Rare item-sets of one cycle's events, as (sorted labels, support).
pub fn mine_cycle(
    events: &[Event],
    sigma: usize,
    max_items: usize,
) -> Result<Vec<(Vec<String>, Support)>> {
    let mut builder = DatabaseBuilder::new();
    for (line, event) in events.iter().enumerate() {
        builder.add_transaction(line, event.items.iter().map(String::as_str));
    }
    let db = builder.build(max_items)?;
    // Supports never exceed |D|, so any sigma above |D| + 1 selects the same
    // item-sets as |D| + 1 does.
    let sigma = sigma.min(db.len() + 1);
    let config = MiningConfig::new(sigma)
        .with_emit(Emit::Rare)
        .with_max_items(max_items);
    Ok(aranim::mine(&db, &config)?
        .into_iter()
        .map(|m| {
            let labels = db
                .sorted_labels(&m.itemset)
                .into_iter()
                .map(String::from)
                .collect();
            (labels, m.support)
        })
        .collect())
}

/// Runs one mining window starting at `window_start`.
///
/// For each cycle the clock is advanced to the cycle's end, every queued
/// event stamped before that end is taken and mined. Events at or after the
/// window's end stay queued. Alerts go to `sink` in pattern order, then the
/// recurrence table is appended to the store when one is configured.
pub fn run_window<S, C>(
    queue: &EventQueue,
    config: &EventWindowConfig,
    sink: &mut S,
    clock: &mut C,
    window_start: u64,
) -> Result<WindowReport>
where
    S: AlertSink + ?Sized,
    C: Clock + ?Sized,
{
    config.validate()?;
    let mut table: BTreeMap<(usize, Vec<String>), PatternRecurrence> = BTreeMap::new();
    let mut cycles = Vec::with_capacity(config.cycles);

    for cycle in 0..config.cycles {
        let start = window_start + cycle as u64 * config.duration_ms;
        let end = start + config.duration_ms;
        clock.wait_until(end);
        let bucket = queue.take_before(end);
        let rare = mine_cycle(&bucket, config.sigma, config.max_items)?;
        cycles.push(CycleSummary {
            start,
            transactions: bucket.len(),
            rare_patterns: rare.len(),
        });
        for (labels, support) in rare {
            let entry = table
                .entry((labels.len(), labels.clone()))
                .or_insert_with(|| PatternRecurrence {
                    itemset: ItemSet::empty(0),
                    labels,
                    cycles_detected: 0,
                    last_support: Support(0),
                    supports_per_cycle: vec![None; config.cycles],
                });
            entry.cycles_detected += 1;
            entry.last_support = support;
            entry.supports_per_cycle[cycle] = Some(support);
        }
    }

    let mut dictionary = ItemDictionary::new();
    let mut all_labels: Vec<&str> = table
        .values()
        .flat_map(|r| r.labels.iter().map(String::as_str))
        .collect();
    all_labels.sort_unstable();
    for label in all_labels {
        dictionary.intern(label);
    }
    let recurrences: Vec<PatternRecurrence> = table
        .into_values()
        .map(|mut r| {
            r.itemset = dictionary
                .itemset_of(r.labels.iter().map(String::as_str))
                .expect("labels were interned above");
            r
        })
        .collect();

    let mut alerts = Vec::new();
    for r in recurrences
        .iter()
        .filter(|r| r.cycles_detected >= config.cycles)
    {
        let alert = Alert {
            window_start,
            itemset: r.itemset.clone(),
            labels: r.labels.clone(),
            cycles_detected: r.cycles_detected,
            supports_per_cycle: r.supports_per_cycle.iter().flatten().copied().collect(),
        };
        sink.alert(&alert);
        alerts.push(alert);
    }

    let report = WindowReport {
        window_start,
        cycles,
        dictionary,
        recurrences,
        alerts,
    };
    if let Some(path) = &config.store_path {
        persist(&report.store_records(config.cycles), path).map_err(|source| Error::Store {
            path: path.clone(),
            source,
        })?;
    }
    Ok(report)
}

/// Replays a recorded stream window by window on a virtual clock.
///
/// The first window starts at the earliest timestamp. Later windows stay
/// aligned to it; windows that would hold no event are skipped.
pub fn replay<S>(
    events: Vec<Event>,
    config: &EventWindowConfig,
    sink: &mut S,
) -> Result<Vec<WindowReport>>
where
    S: AlertSink + ?Sized,
{
    config.validate()?;
    let window = config.window_ms();
    let queue = EventQueue::from(events);
    let mut clock = VirtualClock::default();
    let mut reports = Vec::new();
    let mut previous_start: Option<u64> = None;
    while let Some(first) = queue.earliest_timestamp() {
        let start = match previous_start {
            None => first,
            Some(prev) => prev + window * ((first - prev) / window),
        };
        reports.push(run_window(&queue, config, sink, &mut clock, start)?);
        previous_start = Some(start);
    }
    Ok(reports)
}

/// Appends one JSON line per record to `path`, creating the file if needed.
pub fn persist(records: &[StoreRecord], path: &Path) -> std::io::Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
