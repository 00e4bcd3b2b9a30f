//! Persistent store of Λ^(m)(s) values.
//!
//! One file per (form digest, m) holds tab-separated records
//!
//! ```text
//! v1  digest  m  s  P  digits  re  im  error  route  checksum
//! ```
//!
//! with decimal values written to `digits` significant digits, enough for a
//! bit-exact round trip at the working precision of P. The checksum is the
//! first 16 hex digits of SHA-256 over the preceding fields. Appends rewrite
//! the file into a temporary sibling and rename it into place, so a reader
//! sees either the old or the new file and never a partial record. Writers
//! are serialized by a lock file.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, SystemTime};

use ppoly_core::forms::Form;
use ppoly_core::lvalues::{LDerivativeTable, LValue, Route};
use ppoly_core::num::{parse_float, roundtrip_digits, to_decimal, work};
use ppoly_core::BigComplex;
use sha2::{Digest, Sha256};

const VERSION: &str = "v1";
const EXTENSION: &str = "ppc";
const LOCK_STALE: Duration = Duration::from_secs(60);

static WRITERS: Mutex<()> = Mutex::new(());
static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Identity of a form: its id, weight and the first coefficients to 15
/// significant digits.
pub fn form_digest(form: &Form) -> String {
    let mut h = Sha256::new();
    h.update(format!("ppoly-form v1\n{}\n{}\n", form.spec.id(), form.weight()));
    for a in form.coeffs.a.iter().take(12) {
        h.update(to_decimal(a, 15));
        h.update("\n");
    }
    hex(&h.finalize())
}

fn checksum(body: &str) -> String {
    hex(&Sha256::digest(body.as_bytes()))[..16].to_string()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub digest: String,
    pub m: u32,
    pub s: u32,
    pub prec: u32,
    pub digits: usize,
    pub re: String,
    pub im: String,
    pub error: String,
    pub route: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordError {
    Malformed,
    Version(String),
    Checksum,
}

impl Record {
    pub fn from_value(digest: &str, m: u32, s: u32, prec: u32, v: &LValue) -> Self {
        let digits = roundtrip_digits(work(prec));
        Record {
            digest: digest.to_string(),
            m,
            s,
            prec,
            digits,
            re: to_decimal(&v.value.re, digits),
            im: to_decimal(&v.value.im, digits),
            error: to_decimal(&v.error, 6),
            route: v.route.label().to_string(),
        }
    }

    fn body(&self) -> String {
        format!(
            "{VERSION}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.digest, self.m, self.s, self.prec, self.digits, self.re, self.im, self.error, self.route
        )
    }

    pub fn line(&self) -> String {
        let body = self.body();
        let sum = checksum(&body);
        format!("{body}\t{sum}")
    }

    pub fn parse(line: &str) -> Result<Record, RecordError> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 11 {
            return Err(RecordError::Malformed);
        }
        if f[0] != VERSION {
            return Err(RecordError::Version(f[0].to_string()));
        }
        let (body, sum) = line.rsplit_once('\t').ok_or(RecordError::Malformed)?;
        if checksum(body) != sum {
            return Err(RecordError::Checksum);
        }
        let num = |s: &str| s.parse::<u32>().map_err(|_| RecordError::Malformed);
        Ok(Record {
            digest: f[1].to_string(),
            m: num(f[2])?,
            s: num(f[3])?,
            prec: num(f[4])?,
            digits: f[5].parse().map_err(|_| RecordError::Malformed)?,
            re: f[6].to_string(),
            im: f[7].to_string(),
            error: f[8].to_string(),
            route: f[9].to_string(),
        })
    }

    /// The stored value at the working precision of `prec`.
    pub fn value(&self, prec: u32) -> Option<LValue> {
        let stored = work(self.prec);
        let wp = work(prec);
        let re = parse_float(stored, &self.re)?;
        let im = parse_float(stored, &self.im)?;
        let error = parse_float(64, &self.error)?;
        let route = match self.route.as_str() {
            "mellin" => Route::Mellin,
            "closed-form" => Route::ClosedForm,
            _ => return None,
        };
        Some(LValue { value: BigComplex::new(re, im).with_prec(wp), error, route })
    }
}

/// Records read from one file, with the count of lines that failed validation.
#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub records: Vec<Record>,
    pub corrupt: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStat {
    pub files: usize,
    pub records: usize,
    pub corrupt: usize,
    pub bytes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GcStat {
    pub kept: usize,
    pub dropped_corrupt: usize,
    pub dropped_duplicate: usize,
}

pub struct Cache {
    dir: PathBuf,
}

struct LockGuard {
    path: PathBuf,
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_for(&self, digest: &str, m: u32) -> PathBuf {
        self.dir.join(format!("{}-m{m}.{EXTENSION}", &digest[..digest.len().min(24)]))
    }

    fn read_file(path: &Path) -> io::Result<Loaded> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Loaded::default()),
            Err(e) => return Err(e),
        };
        let mut out = Loaded::default();
        for line in text.lines().filter(|l| !l.is_empty()) {
            match Record::parse(line) {
                Ok(r) => out.records.push(r),
                Err(_) => out.corrupt += 1,
            }
        }
        Ok(out)
    }

    pub fn load(&self, digest: &str, m: u32) -> io::Result<Loaded> {
        let mut l = Self::read_file(&self.file_for(digest, m))?;
        l.records.retain(|r| r.digest == digest && r.m == m);
        Ok(l)
    }

    /// The table for `form` at `prec`, when every entry is stored at a
    /// precision of at least `prec`. Also returns the number of corrupt
    /// records skipped.
    pub fn lookup_table(&self, form: &Form, digest: &str, m: u32, prec: u32) -> io::Result<(Option<LDerivativeTable>, usize)> {
        let loaded = self.load(digest, m)?;
        let k = form.weight();
        // per s, the lowest stored precision that is still ≥ prec
        let mut best: HashMap<u32, &Record> = HashMap::new();
        for r in &loaded.records {
            if r.prec < prec || r.s == 0 || r.s >= k {
                continue;
            }
            match best.get(&r.s) {
                Some(b) if b.prec <= r.prec => {}
                _ => {
                    best.insert(r.s, r);
                }
            }
        }
        let mut entries = Vec::with_capacity(k as usize - 1);
        for s in 1..k {
            match best.get(&s).and_then(|r| r.value(prec)) {
                Some(v) => entries.push(v),
                None => return Ok((None, loaded.corrupt)),
            }
        }
        Ok((Some(LDerivativeTable { spec: form.spec.clone(), m, prec, entries }), loaded.corrupt))
    }

    fn lock(&self, target: &Path) -> io::Result<LockGuard> {
        let path = target.with_extension(format!("{EXTENSION}.lock"));
        for _ in 0..2000 {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(LockGuard { path }),
                Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                    let stale = fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .map(|t| SystemTime::now().duration_since(t).unwrap_or_default() > LOCK_STALE)
                        .unwrap_or(false);
                    if stale {
                        let _ = fs::remove_file(&path);
                    } else {
                        thread::sleep(Duration::from_millis(5));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(io::Error::new(io::ErrorKind::WouldBlock, format!("cache lock {} is held", path.display())))
    }

    /// Replaces `path` by `lines` through a temporary file and a rename.
    fn replace(path: &Path, lines: &[String]) -> io::Result<()> {
        let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("{EXTENSION}.tmp.{}.{n}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            for l in lines {
                f.write_all(l.as_bytes())?;
                f.write_all(b"\n")?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }

    /// Appends records to the file for `(digest, m)`.
    pub fn append(&self, digest: &str, m: u32, records: &[Record]) -> io::Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let path = self.file_for(digest, m);
        let _process = WRITERS.lock().unwrap_or_else(|e| e.into_inner());
        let _file = self.lock(&path)?;
        let mut lines: Vec<String> = match fs::read_to_string(&path) {
            Ok(t) => t.lines().filter(|l| !l.is_empty()).map(str::to_string).collect(),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e),
        };
        lines.extend(records.iter().map(Record::line));
        Self::replace(&path, &lines)
    }

    pub fn store_table(&self, digest: &str, t: &LDerivativeTable) -> io::Result<()> {
        let recs: Vec<Record> =
            t.entries.iter().enumerate().map(|(i, v)| Record::from_value(digest, t.m, i as u32 + 1, t.prec, v)).collect();
        self.append(digest, t.m, &recs)
    }

    fn files(&self) -> io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            if p.extension().and_then(|x| x.to_str()) == Some(EXTENSION) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn stat(&self) -> io::Result<CacheStat> {
        let mut st = CacheStat::default();
        for p in self.files()? {
            st.files += 1;
            st.bytes += fs::metadata(&p)?.len();
            let l = Self::read_file(&p)?;
            st.records += l.records.len();
            st.corrupt += l.corrupt;
        }
        Ok(st)
    }

    /// Drops corrupt records and repeated keys, keeping for each
    /// `(digest, m, s, P)` the first valid record.
    pub fn gc(&self) -> io::Result<GcStat> {
        let mut st = GcStat::default();
        let _process = WRITERS.lock().unwrap_or_else(|e| e.into_inner());
        for p in self.files()? {
            let _file = self.lock(&p)?;
            let l = Self::read_file(&p)?;
            st.dropped_corrupt += l.corrupt;
            let mut seen: BTreeMap<(String, u32, u32, u32), ()> = BTreeMap::new();
            let mut keep = Vec::new();
            for r in l.records {
                if seen.insert((r.digest.clone(), r.m, r.s, r.prec), ()).is_some() {
                    st.dropped_duplicate += 1;
                } else {
                    keep.push(r.line());
                }
            }
            st.kept += keep.len();
            Self::replace(&p, &keep)?;
        }
        Ok(st)
    }
}
