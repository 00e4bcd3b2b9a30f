use std::fs;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;

use ppoly_cli::cache::{form_digest, Cache, Record};
use ppoly_core::forms::{Form, FormSpec};
use ppoly_core::lvalues::critical_table;

const P: u32 = 128;

fn delta() -> Form {
    Form::build(&FormSpec::cusp(12, 0, P).with_terms(120)).unwrap()
}

#[test]
fn table_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let f = delta();
    let d = form_digest(&f);
    let t = critical_table(&f, 1, P).unwrap();
    cache.store_table(&d, &t).unwrap();
    let (back, corrupt) = cache.lookup_table(&f, &d, 1, P).unwrap();
    assert_eq!(corrupt, 0);
    let back = back.expect("hit");
    assert_eq!(back.entries.len(), t.entries.len());
    for (a, b) in t.entries.iter().zip(&back.entries) {
        assert_eq!(a.value.re, b.value.re);
        assert_eq!(a.value.im, b.value.im);
        assert_eq!(a.route, b.route);
    }
    // a different derivative order is a separate key
    assert!(cache.lookup_table(&f, &d, 0, P).unwrap().0.is_none());
}

#[test]
fn higher_precision_request_misses() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let f = delta();
    let d = form_digest(&f);
    cache.store_table(&d, &critical_table(&f, 0, P).unwrap()).unwrap();
    assert!(cache.lookup_table(&f, &d, 0, P + 64).unwrap().0.is_none());
    // a lower request is served from the stored precision
    let (t, _) = cache.lookup_table(&f, &d, 0, 96).unwrap();
    assert_eq!(t.unwrap().prec, 96);
}

#[test]
fn digest_separates_forms() {
    let a = delta();
    let b = Form::build(&FormSpec::eisenstein(12, P).with_terms(120)).unwrap();
    assert_ne!(form_digest(&a), form_digest(&b));
    // the truncation length is not part of the identity
    let c = Form::build(&FormSpec::cusp(12, 0, P).with_terms(300)).unwrap();
    assert_eq!(form_digest(&a), form_digest(&c));
}

#[test]
fn corrupt_records_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let f = delta();
    let d = form_digest(&f);
    cache.store_table(&d, &critical_table(&f, 0, P).unwrap()).unwrap();
    let path = cache.file_for(&d, 0);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // flip one digit of the s = 3 value
    let i = lines.iter().position(|l| l.split('\t').nth(3) == Some("3")).unwrap();
    let fields: Vec<&str> = lines[i].split('\t').collect();
    let re = fields[6];
    let pos = re.find(|c: char| c.is_ascii_digit() && c != '0').unwrap();
    let bumped = if &re[pos..=pos] == "9" { "1" } else { "9" };
    let new_re = format!("{}{}{}", &re[..pos], bumped, &re[pos + 1..]);
    lines[i] = lines[i].replacen(re, &new_re, 1);
    lines.push("garbage line".into());
    fs::write(&path, lines.join("\n") + "\n").unwrap();

    let (t, corrupt) = cache.lookup_table(&f, &d, 0, P).unwrap();
    assert_eq!(corrupt, 2);
    assert!(t.is_none(), "table with a corrupt entry must miss");
    assert_eq!(cache.stat().unwrap().corrupt, 2);

    // recomputing and appending repairs the table; gc drops the bad lines
    cache.store_table(&d, &critical_table(&f, 0, P).unwrap()).unwrap();
    assert!(cache.lookup_table(&f, &d, 0, P).unwrap().0.is_some());
    let g = cache.gc().unwrap();
    assert_eq!(g.dropped_corrupt, 2);
    assert_eq!(g.dropped_duplicate, 10);
    assert_eq!(g.kept, 11);
    assert_eq!(cache.stat().unwrap().corrupt, 0);
}

fn synthetic(m: u32, s: u32) -> Record {
    Record {
        digest: "0f".repeat(32),
        m,
        s,
        prec: 128,
        digits: 42,
        re: format!("{s}.{}", "7".repeat(40)),
        im: "0".into(),
        error: "1e-40".into(),
        route: "mellin".into(),
    }
}

#[test]
fn concurrent_readers_see_complete_records() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(Cache::open(dir.path()).unwrap());
    let digest = "0f".repeat(32);
    let done = Arc::new(AtomicBool::new(false));

    let writers: Vec<_> = (0..2)
        .map(|w| {
            let cache = cache.clone();
            let digest = digest.clone();
            thread::spawn(move || {
                for s in 0..60 {
                    cache.append(&digest, 0, &[synthetic(0, 2 * s + w)]).unwrap();
                }
            })
        })
        .collect();
    let readers: Vec<_> = (0..4)
        .map(|_| {
            let cache = cache.clone();
            let digest = digest.clone();
            let done = done.clone();
            thread::spawn(move || {
                let mut last = 0;
                let mut reads = 0;
                while !done.load(Ordering::Relaxed) || reads == 0 {
                    let l = cache.load(&digest, 0).unwrap();
                    assert_eq!(l.corrupt, 0, "reader saw a partial record");
                    assert!(l.records.len() >= last, "records disappeared");
                    last = l.records.len();
                    reads += 1;
                }
                last
            })
        })
        .collect();
    for w in writers {
        w.join().unwrap();
    }
    done.store(true, Ordering::Relaxed);
    for r in readers {
        r.join().unwrap();
    }
    let l = cache.load(&digest, 0).unwrap();
    assert_eq!(l.records.len(), 120);
    let mut s: Vec<u32> = l.records.iter().map(|r| r.s).collect();
    s.sort();
    assert_eq!(s, (0..120).collect::<Vec<_>>());
}

#[test]
fn separate_processes_share_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let children: Vec<_> = (0..3)
        .map(|_| {
            let path = dir.path().to_path_buf();
            thread::spawn(move || {
                std::process::Command::new(env!("CARGO_BIN_EXE_ppoly"))
                    .args(["lvalues", "--weight", "12", "--kind", "eisenstein", "--precision-bits", "96"])
                    .env("PPOLY_CACHE_DIR", path)
                    .output()
                    .unwrap()
            })
        })
        .collect();
    let outs: Vec<_> = children.into_iter().map(|c| c.join().unwrap()).collect();
    for o in &outs {
        assert!(o.status.success());
        assert_eq!(o.stdout, outs[0].stdout);
    }
    let stat = Cache::open(dir.path()).unwrap().stat().unwrap();
    assert_eq!(stat.corrupt, 0);
    assert_eq!(stat.records % 11, 0);
}
