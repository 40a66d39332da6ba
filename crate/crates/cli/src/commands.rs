use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use orthoforms::congruence::{default_threshold, eigenvalue_congruences, lambda_table};
use orthoforms::genus::{enumerate_genus_with, GenusConfig, GenusData};
use orthoforms::hecke::{decompose, hecke_eigenvalue_with, hecke_matrix_with, HeckeConfig, HeckeMatrix, ModularForm};
use orthoforms::isom::IsomConfig;
use orthoforms::lattice::{named_lattice, Lattice};
use orthoforms::lfun::{character, classify_lambda, eisenstein_lambda, lpoly_rank4, Family};
use orthoforms::moddata::load_ap_table;
use orthoforms::neighbour::neighbour_count;
use orthoforms::theta::{depth_estimate, kernel_census, siegel_theta, theta_kernel, theta_map};
use orthoforms::{Integer, Rational};

use crate::config::Config;
use crate::manifest::write_atomic;
use crate::{CliError, LatticeArg, Output};

pub struct Context {
    pub cfg: Config,
}

fn pretty<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn parse_form(text: &str) -> Result<ModularForm, CliError> {
    let coeffs: Result<Vec<Rational>, _> = text
        .split(',')
        .map(|s| orthoforms::textual::parse_rational(s.trim()).ok_or(s))
        .collect();
    coeffs
        .map(ModularForm::new)
        .map_err(|s| CliError::Usage(format!("bad form entry {s:?}")))
}

fn load_lattice(arg: &LatticeArg) -> Result<(String, Lattice), CliError> {
    match (&arg.lattice, &arg.gram) {
        (Some(name), None) => Ok((name.clone(), named_lattice(name)?)),
        (None, Some(path)) => {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((stem, Lattice::from_file(path)?))
        }
        _ => Err(CliError::Usage("pass exactly one of --lattice or --gram".into())),
    }
}

const SEEDS: [(&str, &str); 3] = [
    ("d1369", include_str!("../../../fixtures/lattices/d1369_1.json")),
    ("d193", include_str!("../../../fixtures/lattices/d193.json")),
    ("d39", include_str!("../../../fixtures/lattices/d39.json")),
];

impl Context {
    fn hecke_cfg(&self) -> HeckeConfig {
        HeckeConfig {
            isom: IsomConfig { node_cap: self.cfg.node_cap },
            orbit_mode: self.cfg.orbit_mode,
        }
    }

    fn enumerate(&self, l: &Lattice, prime: Option<u64>) -> Result<GenusData, CliError> {
        let cfg = GenusConfig {
            prime,
            isom: IsomConfig { node_cap: self.cfg.node_cap },
            ..Default::default()
        };
        Ok(enumerate_genus_with(l, &cfg)?)
    }

    fn cache_path(&self, name: &str) -> PathBuf {
        self.cfg.cache_dir.join(format!("{name}.json"))
    }

    fn load_genus(&self, name: &str) -> Result<GenusData, CliError> {
        let direct = Path::new(name);
        let path = if direct.is_file() {
            direct.to_path_buf()
        } else if self.cfg.cache_dir.join(name).is_file() {
            self.cfg.cache_dir.join(name)
        } else if self.cache_path(name).is_file() {
            self.cache_path(name)
        } else {
            return Err(CliError::CacheMiss {
                name: name.to_string(),
                dir: self.cfg.cache_dir.display().to_string(),
            });
        };
        Ok(GenusData::load(&path)?)
    }

    fn matrix(&self, g: &GenusData, p: u64, k: usize) -> Result<HeckeMatrix, CliError> {
        Ok(hecke_matrix_with(g, p, k, &self.hecke_cfg())?)
    }

    pub fn genus(&self, arg: &LatticeArg, prime: Option<u64>, name: Option<String>) -> Result<Output, CliError> {
        let (default_name, l) = load_lattice(arg)?;
        let g = self.enumerate(&l, prime)?;
        let path = self.cache_path(&name.unwrap_or(default_name));
        let cache = g.to_json();
        write_atomic(&path, &cache)?;
        let summary = pretty(&json!({
            "cache": path.display().to_string(),
            "rank": g.rank,
            "discriminant": g.discriminant,
            "prime": g.prime,
            "class_number": g.class_number(),
            "aut_orders": g.aut_orders.iter().map(Integer::to_string).collect::<Vec<_>>(),
            "mass": orthoforms::textual::rational_to_string(&g.mass),
        }))?;
        Ok(Output { stdout: summary, file: Some(cache) })
    }

    pub fn hecke(&self, genus: &str, p: u64, k: usize) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        let m = self.matrix(&g, p, k)?;
        pretty(&json!({
            "p": p,
            "k": k,
            "matrix": m.entries,
            "charpoly": m.char_poly().to_string(),
        }))
    }

    pub fn eigen(&self, genus: &str, primes: &[u64]) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        let mats = primes.iter().map(|&p| self.matrix(&g, p, 1)).collect::<Result<Vec<_>, _>>()?;
        pretty(&decompose(&mats)?)
    }

    pub fn eigenvalue(&self, genus: &str, form: &str, p: u64, k: usize, verify: bool) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        let f = parse_form(form)?;
        let v = hecke_eigenvalue_with(&g, &f, p, k, &self.hecke_cfg(), verify)?;
        pretty(&json!({ "p": p, "k": k, "value": orthoforms::textual::rational_to_string(&v) }))
    }

    pub fn lpoly4(&self, genus: &str, form: &str, p: u64) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        if g.rank != 4 {
            return Err(CliError::Usage(format!("lpoly4 needs a rank-4 genus, got rank {}", g.rank)));
        }
        let f = parse_form(form)?;
        let chi = character(4, g.discriminant, p)?;
        let mut lambdas = Vec::new();
        for k in 1..=2 {
            let v = hecke_eigenvalue_with(&g, &f, p, k, &self.hecke_cfg(), true)?;
            if !v.is_integer() {
                return Err(CliError::Usage(format!("λ_{{{p},{k}}} = {v} is not integral")));
            }
            lambdas.push(v.to_integer());
        }
        let l = lpoly_rank4(&lambdas[0], &lambdas[1], p, chi)?;
        pretty(&json!({
            "p": p,
            "chi": chi,
            "lambda1": lambdas[0].to_string(),
            "lambda2": lambdas[1].to_string(),
            "coefficients": l.poly.coeffs().iter().map(Integer::to_string).collect::<Vec<_>>(),
            "lpoly": l.poly.to_string(),
        }))
    }

    pub fn theta(
        &self,
        arg: &LatticeArg,
        genus: Option<&str>,
        form: Option<&str>,
        g: usize,
        bound: Option<usize>,
        allow_g3: bool,
    ) -> Result<String, CliError> {
        match g {
            3 if !allow_g3 => return Err(CliError::Usage("g = 3 is expensive; pass --allow-g3".into())),
            0 | 4.. => return Err(CliError::Usage(format!("g = {g} is not supported; use 1, 2 or 3"))),
            _ => {}
        }
        let bound = bound.unwrap_or(self.cfg.theta_bound);
        let series = match (genus, form) {
            (Some(genus), Some(form)) => theta_map(&self.load_genus(genus)?, &parse_form(form)?, g, bound)?,
            (None, None) => siegel_theta(&load_lattice(arg)?.1, g, bound)?,
            _ => return Err(CliError::Usage("--genus and --form go together".into())),
        };
        Ok(series.to_json())
    }

    pub fn depth(&self, genus: &str, form: &str, gmax: usize, bounds: &[usize]) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        let f = parse_form(form)?;
        let bounds: Vec<usize> = if bounds.is_empty() { vec![self.cfg.theta_bound; gmax] } else { bounds.to_vec() };
        pretty(&depth_estimate(&g, &f, gmax, &bounds)?)
    }

    pub fn conjecture12(
        &self,
        genus: Option<&str>,
        fixture: &Path,
        max_d: i64,
        bound1: usize,
        bound2: usize,
        window2: usize,
    ) -> Result<String, CliError> {
        #[derive(Deserialize)]
        struct Seed {
            discriminant: i64,
            gram: Vec<Vec<i64>>,
        }
        let genera = match genus {
            Some(name) => vec![self.load_genus(name)?],
            None => {
                let seeds: Vec<Seed> = serde_json::from_str(&std::fs::read_to_string(fixture)?)?;
                let mut out = Vec::new();
                for s in seeds.into_iter().filter(|s| s.discriminant <= max_d) {
                    let l = Lattice::new(s.gram)?;
                    if l.discriminant() != s.discriminant {
                        return Err(CliError::Usage(format!(
                            "fixture gram has discriminant {}, not {}",
                            l.discriminant(),
                            s.discriminant
                        )));
                    }
                    out.push(self.enumerate(&l, None)?);
                }
                out
            }
        };
        let mut rows = Vec::new();
        for g in &genera {
            let k1 = theta_kernel(g, 1, bound1)?;
            let census = kernel_census(g, bound2, window2)?;
            rows.push(json!({
                "discriminant": g.discriminant,
                "class_number": g.class_number(),
                "kernel1_dimension": k1.dimension(),
                "kernel1_stable": k1.is_stable(),
                "kernel2_dimension": census.kernel.dimension(),
                "kernel2_stable": census.kernel.is_stable(),
                "classes_without_det_minus_one": census.classes_without_det_minus_one,
                "counts_agree": census.counts_agree(),
            }));
        }
        pretty(&json!({ "bound1": bound1, "bound2": bound2, "window2": window2, "rows": rows }))
    }

    pub fn verify(&self, genus: &str, primes: &[u64]) -> Result<String, CliError> {
        let g = self.load_genus(genus)?;
        let mats = primes.iter().map(|&p| self.matrix(&g, p, 1)).collect::<Result<Vec<_>, _>>()?;
        let mut checks = Vec::new();
        let mut push = |name: String, ok: bool| checks.push(json!({ "check": name, "ok": ok }));
        for m in &mats {
            let expected = eisenstein_lambda(g.rank, g.discriminant, m.p)?;
            let total = neighbour_count(g.rank, g.discriminant, m.p, 1)?;
            let sums = m.column_sums();
            push(format!("column sums at p = {}", m.p), sums.iter().all(|&s| Integer::from(s) == total));
            push(format!("Eisenstein closed form at p = {}", m.p), expected == total);
            push(format!("weighted symmetry at p = {}", m.p), m.is_weighted_symmetric(&g.aut_orders));
        }
        for (i, a) in mats.iter().enumerate() {
            for b in &mats[i + 1..] {
                push(format!("T_{} T_{} commute", a.p, b.p), a.commutes_with(b));
            }
        }
        let dec = decompose(&mats)?;
        for (i, e) in dec.eigenforms.iter().enumerate() {
            for m in &mats {
                let fast = hecke_eigenvalue_with(&g, &e.form(), m.p, 1, &self.hecke_cfg(), false)?;
                push(format!("eigenform {i}: single-class eigenvalue at p = {}", m.p), Some(&fast) == e.lambda(m.p, 1));
            }
        }
        let ok = checks.iter().all(|c| c["ok"] == Value::Bool(true));
        let text = pretty(&json!({ "ok": ok, "checks": checks }))?;
        if ok {
            Ok(text)
        } else {
            Err(CliError::Failed(text))
        }
    }

    pub fn verify_family(&self, genus: &str, primes: &[u64], form: &str, family: &str, ap: &[PathBuf]) -> Result<String, CliError> {
        let family: Family = serde_json::from_value(Value::String(family.to_string())).map_err(|_| {
            CliError::Usage(format!(
                "unknown family {family:?}; try eisenstein, sym2-depth1, saito-kurokawa, ikeda-g4 or miyawaki"
            ))
        })?;
        let g = self.load_genus(genus)?;
        let f = parse_form(form)?;
        let tables = ap.iter().map(|p| load_ap_table(p)).collect::<Result<Vec<_>, _>>()?;
        let mut lambdas = std::collections::BTreeMap::new();
        for &p in primes.iter().filter(|&&p| g.discriminant % p as i64 != 0) {
            lambdas.insert(p, hecke_eigenvalue_with(&g, &f, p, 1, &self.hecke_cfg(), false)?);
        }
        let report = classify_lambda(form, &lambdas, &tables, g.rank, g.discriminant)?;
        let ok = report.matching().any(|c| c.family == family);
        let text = pretty(&json!({
            "ok": ok,
            "family": family,
            "lambdas": lambdas.iter().map(|(p, l)| (p.to_string(), orthoforms::textual::rational_to_string(l))).collect::<std::collections::BTreeMap<_, _>>(),
            "report": report,
        }))?;
        if ok {
            Ok(text)
        } else {
            Err(CliError::Failed(text))
        }
    }

    pub fn congruence(&self, genus: &str, forms: &[usize], primes: &[u64], threshold: Option<u64>) -> Result<String, CliError> {
        let &[i, j] = forms else {
            return Err(CliError::Usage("--forms takes two indices i,j".into()));
        };
        let g = self.load_genus(genus)?;
        let mats = primes.iter().map(|&p| self.matrix(&g, p, 1)).collect::<Result<Vec<_>, _>>()?;
        let dec = decompose(&mats)?;
        let pick = |i: usize| {
            dec.eigenforms
                .get(i)
                .ok_or_else(|| CliError::Usage(format!("only {} rational eigenforms", dec.eigenforms.len())))
        };
        let (a, b) = (pick(i)?, pick(j)?);
        let (ta, tb) = (lambda_table(a), lambda_table(b));
        let mut report = eigenvalue_congruences(
            (&i.to_string(), &j.to_string()),
            &ta,
            &tb,
            threshold.unwrap_or(default_threshold(g.rank)),
        )?;
        report.attach_witnesses(&a.vector, &b.vector, &ta, &tb)?;
        Ok(report.to_json())
    }

    pub fn bench(&self, suite: &str) -> Result<String, CliError> {
        let (seed, bound) = match suite {
            "empty" => return pretty(&json!({ "suite": suite, "rows": [], "notes": [] })),
            "d1369" => (SEEDS[0].1, 20),
            "d193" => (SEEDS[1].1, 20),
            "d39" => (SEEDS[2].1, 8),
            _ => return Err(CliError::Usage(format!("unknown suite {suite:?}; try d1369, d193, d39 or empty"))),
        };
        let l = Lattice::from_json(seed)?;
        let start = Instant::now();
        let g = self.enumerate(&l, None)?;
        let setup_ms = start.elapsed().as_secs_f64() * 1e3;
        let primes: Vec<u64> = (2..bound).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
        let mut rows = Vec::new();
        let mut mats = Vec::new();
        let mut per_neighbour: Vec<(i32, f64)> = Vec::new();
        for &p in &primes {
            let chi = match character(g.rank, g.discriminant, p) {
                Ok(c) => c,
                Err(_) => {
                    rows.push(json!({ "p": p, "form": null, "skipped": "p divides the discriminant" }));
                    continue;
                }
            };
            let t = Instant::now();
            let m = self.matrix(&g, p, 1)?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            let n = neighbour_count(g.rank, g.discriminant, p, 1)?;
            let nn: f64 = n.to_string().parse().unwrap_or(f64::NAN) * g.class_number() as f64;
            per_neighbour.push((chi, ms / nn));
            rows.push(json!({ "p": p, "chi": chi, "form": "all", "millis": ms, "neighbours": n.to_string() }));
            mats.push(m);
        }
        if !mats.is_empty() {
            let dec = decompose(&mats)?;
            for e in &dec.eigenforms {
                let form: Vec<String> = e.vector.iter().map(Integer::to_string).collect();
                for m in &mats {
                    let t = Instant::now();
                    hecke_eigenvalue_with(&g, &e.form(), m.p, 1, &self.hecke_cfg(), false)?;
                    rows.push(json!({ "p": m.p, "form": form, "millis": t.elapsed().as_secs_f64() * 1e3 }));
                }
            }
        }
        let mean = |c: i32| {
            let v: Vec<f64> = per_neighbour.iter().filter(|x| x.0 == c).map(|x| x.1).collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        let mut notes = vec![format!("genus setup {setup_ms:.1} ms, h = {}", g.class_number())];
        if let (Some(a), Some(b)) = (mean(1), mean(-1)) {
            notes.push(format!("time per neighbour, split over inert: {:.2}", a / b));
        }
        notes.push("primes dividing D are rejected by the operator and not timed".into());
        pretty(&json!({ "suite": suite, "rows": rows, "notes": notes }))
    }
}
