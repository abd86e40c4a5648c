use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Barrier;
use std::thread;
use std::time::{Duration, Instant};

use crate::backend::BackendHandle;

/// RAM sampling period while a measured window is open.
pub const SAMPLE_INTERVAL: Duration = Duration::from_millis(100);

/// Anything that can report a memory footprint in bytes.
pub trait RamProbe: Sync {
    fn sample(&self) -> Option<u64>;
}

impl<F: Fn() -> Option<u64> + Sync> RamProbe for F {
    fn sample(&self) -> Option<u64> {
        self()
    }
}

impl RamProbe for BackendHandle {
    fn sample(&self) -> Option<u64> {
        self.ram_probe()
    }
}

/// Probe that never reports a value.
pub struct NoProbe;

impl RamProbe for NoProbe {
    fn sample(&self) -> Option<u64> {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub wall_time: Duration,
    pub peak_ram: Option<u64>,
    pub query_count: usize,
    pub repetition_index: usize,
}

impl Measurement {
    pub fn seconds(&self) -> f64 {
        self.wall_time.as_secs_f64()
    }
}

/// Result of a timed window.
#[derive(Clone, Debug)]
pub struct Timed<T> {
    pub wall_time: Duration,
    pub peak_ram: Option<u64>,
    pub value: T,
}

impl<T> Timed<T> {
    pub fn into_measurement(self, query_count: usize, repetition_index: usize) -> (Measurement, T) {
        (
            Measurement {
                wall_time: self.wall_time,
                peak_ram: self.peak_ram,
                query_count,
                repetition_index,
            },
            self.value,
        )
    }
}

fn sample_until(probe: &dyn RamProbe, stop: Receiver<()>) -> Option<u64> {
    let mut peak: Option<u64> = None;
    let take = |peak: &mut Option<u64>| {
        if let Some(v) = probe.sample() {
            *peak = Some(peak.map_or(v, |p| p.max(v)));
        }
    };
    loop {
        take(&mut peak);
        match stop.recv_timeout(SAMPLE_INTERVAL) {
            Err(RecvTimeoutError::Timeout) => continue,
            _ => break,
        }
    }
    take(&mut peak);
    peak
}

fn nonzero(d: Duration) -> Duration {
    d.max(Duration::from_nanos(1))
}

/// Times `submit` from call to return while sampling `probe` on a side
/// thread; the peak sample is kept.
pub fn measure<T>(probe: &dyn RamProbe, submit: impl FnOnce() -> T) -> Timed<T> {
    let (stop_tx, stop_rx) = mpsc::channel();
    thread::scope(|s| {
        let sampler = s.spawn(move || sample_until(probe, stop_rx));
        let t0 = Instant::now();
        let value = submit();
        let wall_time = nonzero(t0.elapsed());
        drop(stop_tx);
        let peak_ram = sampler.join().expect("ram sampler panicked");
        Timed {
            wall_time,
            peak_ram,
            value,
        }
    })
}

/// Runs each lane on its own thread. All lanes start behind a common barrier;
/// the window spans the earliest lane start to the latest lane finish. On
/// failure the first error in lane order is returned.
pub fn run_lanes<Q, R, E, F>(lanes: &[Vec<Q>], probe: &dyn RamProbe, f: F) -> Result<Timed<Vec<Vec<R>>>, E>
where
    Q: Sync,
    R: Send,
    E: Send,
    F: Fn(&Q) -> Result<R, E> + Sync,
{
    let barrier = Barrier::new(lanes.len());
    let (stop_tx, stop_rx) = mpsc::channel();
    let f = &f;
    let barrier = &barrier;
    thread::scope(|s| {
        let sampler = s.spawn(move || sample_until(probe, stop_rx));
        let workers: Vec<_> = lanes
            .iter()
            .map(|lane| {
                s.spawn(move || {
                    barrier.wait();
                    let started = Instant::now();
                    let out: Result<Vec<R>, E> = lane.iter().map(f).collect();
                    (started, Instant::now(), out)
                })
            })
            .collect();
        let joined: Vec<_> = workers
            .into_iter()
            .map(|w| w.join().expect("worker lane panicked"))
            .collect();
        drop(stop_tx);
        let peak_ram = sampler.join().expect("ram sampler panicked");

        let first = joined.iter().map(|j| j.0).min();
        let last = joined.iter().map(|j| j.1).max();
        let wall_time = match (first, last) {
            (Some(a), Some(b)) => nonzero(b.duration_since(a)),
            _ => nonzero(Duration::ZERO),
        };
        let value = joined
            .into_iter()
            .map(|(_, _, r)| r)
            .collect::<Result<Vec<_>, E>>()?;
        Ok(Timed {
            wall_time,
            peak_ram,
            value,
        })
    })
}

/// Deals `items` round-robin onto `workers` lanes.
pub fn round_robin<Q: Clone>(items: &[Q], workers: usize) -> Vec<Vec<Q>> {
    let workers = workers.max(1);
    let mut lanes = vec![Vec::new(); workers.min(items.len().max(1))];
    let n = lanes.len();
    for (i, q) in items.iter().enumerate() {
        lanes[i % n].push(q.clone());
    }
    lanes
}

/// Splits `items` into `parts` contiguous portions of equal size; the last
/// portion absorbs the remainder.
pub fn partition<T: Clone>(items: &[T], parts: usize) -> Vec<Vec<T>> {
    let parts = parts.max(1);
    let size = items.len() / parts;
    (0..parts)
        .map(|p| {
            let lo = p * size;
            let hi = if p + 1 == parts { items.len() } else { lo + size };
            items[lo..hi].to_vec()
        })
        .collect()
}

/// Submits `queries` from `workers` concurrent lanes (round-robin) and returns
/// results in the original query order.
pub fn run_concurrent<Q, R, E, F>(
    queries: &[Q],
    workers: usize,
    probe: &dyn RamProbe,
    f: F,
) -> Result<Timed<Vec<R>>, E>
where
    Q: Clone + Sync,
    R: Send,
    E: Send,
    F: Fn(&Q) -> Result<R, E> + Sync,
{
    let lanes = round_robin(queries, workers);
    let n = lanes.len();
    let timed = run_lanes(&lanes, probe, f)?;
    let mut per_lane: Vec<std::vec::IntoIter<R>> = timed.value.into_iter().map(Vec::into_iter).collect();
    let value = (0..queries.len())
        .map(|i| per_lane[i % n].next().expect("lane sizes match round-robin"))
        .collect();
    Ok(Timed {
        wall_time: timed.wall_time,
        peak_ram: timed.peak_ram,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn measures_sleep() {
        let t = measure(&NoProbe, || thread::sleep(Duration::from_millis(20)));
        assert!(t.wall_time >= Duration::from_millis(20));
        assert_eq!(t.peak_ram, None);
        let t = measure(&NoProbe, || ());
        assert!(t.wall_time > Duration::ZERO);
    }

    #[test]
    fn constant_probe_is_the_peak() {
        let gb = 1u64 << 30;
        let t = measure(&move || Some(gb), || thread::sleep(Duration::from_millis(5)));
        assert_eq!(t.peak_ram, Some(gb));
    }

    #[test]
    fn peak_tracks_maximum() {
        let calls = AtomicUsize::new(0);
        let probe = || Some(calls.fetch_add(1, Ordering::SeqCst) as u64 * 10);
        let t = measure(&probe, || thread::sleep(Duration::from_millis(250)));
        let n = calls.load(Ordering::SeqCst) as u64;
        assert!(n >= 3, "sampled {n} times");
        assert_eq!(t.peak_ram, Some((n - 1) * 10));
    }

    #[test]
    fn ten_thousand_nodes_in_ten_portions() {
        let items: Vec<u32> = (0..10_000).collect();
        let parts = partition(&items, 10);
        assert!(parts.iter().all(|p| p.len() == 1_000));
        let parts = partition(&items[..1005], 10);
        assert_eq!(parts[9].len(), 105);
    }

    #[test]
    fn concurrent_results_keep_order() {
        let qs: Vec<u32> = (0..23).collect();
        let t = run_concurrent(&qs, 10, &NoProbe, |q| Ok::<_, ()>(q * 2)).unwrap();
        assert_eq!(t.value, qs.iter().map(|q| q * 2).collect::<Vec<_>>());
        let single = run_concurrent(&qs, 1, &NoProbe, |q| Ok::<_, ()>(q * 2)).unwrap();
        assert_eq!(single.value, t.value);
    }

    #[test]
    fn worker_error_fails_measurement() {
        let qs: Vec<u32> = (0..10).collect();
        let r = run_concurrent(&qs, 4, &NoProbe, |&q| if q == 7 { Err(q) } else { Ok(q) });
        assert_eq!(r.unwrap_err(), 7);
    }

    proptest! {
        #[test]
        fn partition_reunites(len in 0usize..500, parts in 1usize..16) {
            let items: Vec<usize> = (0..len).collect();
            let joined: Vec<usize> = partition(&items, parts).concat();
            prop_assert_eq!(joined, items);
        }

        #[test]
        fn round_robin_covers_each_once(len in 0usize..200, workers in 1usize..16) {
            let items: Vec<usize> = (0..len).collect();
            let mut all: Vec<usize> = round_robin(&items, workers).concat();
            all.sort_unstable();
            prop_assert_eq!(all, items);
        }
    }
}
