//! Text and CSV views of a report. JSON is the complete form; these keep
//! the fields a reader scans for.

use std::fmt::Write;

use pgcode_core::spectrum::theorems::CheckDetail;

use crate::commands::Output;
use crate::Which;

type Rows = csv::Writer<Vec<u8>>;

fn csv_row(out: &mut Rows, fields: &[&str]) {
    out.write_record(fields).expect("writing to memory");
}

fn check_line(d: &CheckDetail) -> String {
    match d {
        CheckDetail::Gap { code, report } => {
            let w = report.witness.as_ref().map(|w| format!(", witness of weight {}", w.weight)).unwrap_or_default();
            format!("{code}: {} {:?} ({:?}, {} steps{w})", report.interval, report.verdict, report.mode, report.steps)
        }
        CheckDetail::Construction { code, expected_weight, witness, in_exclusion } => {
            let ex = in_exclusion.map(|b| format!(", in exempt subcode: {b}")).unwrap_or_default();
            format!("{code}: constructed weight {} (expected {expected_weight}){ex}", witness.weight)
        }
        CheckDetail::MinimumWords { code, weight, classes, words, structured, difference_classes } => format!(
            "{code}: minimum {weight}, {words} words in {classes} classes, {structured} structured, {difference_classes} difference classes"
        ),
        CheckDetail::Sampling { code, samples, violations, tally } => {
            let t: Vec<String> = tally.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            format!("{code}: {samples} samples, {violations} violations [{}]", t.join("; "))
        }
        CheckDetail::SubcodeEquality { left, right, left_dim, right_dim } => {
            format!("{left} (dim {left_dim}) vs {right} (dim {right_dim})")
        }
    }
}

fn kind(d: &CheckDetail) -> &'static str {
    match d {
        CheckDetail::Gap { .. } => "gap",
        CheckDetail::Construction { .. } => "construction",
        CheckDetail::MinimumWords { .. } => "minimum-words",
        CheckDetail::Sampling { .. } => "sampling",
        CheckDetail::SubcodeEquality { .. } => "subcode-equality",
    }
}

pub fn text(o: &Output) -> String {
    let mut s = String::new();
    match o {
        Output::Build(m) => {
            let _ = writeln!(s, "C_{}({}, {}): length {}, dim {}", m.k, m.n, m.q, m.length, m.dim);
            let _ = writeln!(s, "dual dim {}, hull dim {}", m.dual_dim, m.hull_dim);
            let _ = writeln!(s, "theta_n {}, theta_k {}, theta_(n-k) {}", m.theta_n, m.theta_k, m.theta_n_minus_k);
            let _ = writeln!(s, "files: {}, {}, manifest.json", m.generator_file, m.dual_file);
        }
        Output::Verify(reports) => {
            for r in reports {
                let i = r.instance;
                let _ = writeln!(s, "{} on n={} q={} k={}: {}", r.id, i.n, r.q, i.k, r.summary);
                let _ = writeln!(s, "  {}", r.statement);
                if !r.unmet.is_empty() {
                    let _ = writeln!(s, "  unmet: {}", r.unmet.join(", "));
                }
                for n in &r.notes {
                    let _ = writeln!(s, "  note: {n}");
                }
                for c in &r.checks {
                    let mark = if c.passed { "ok" } else { "FAIL" };
                    let ev = if c.evidence { " (evidence)" } else { "" };
                    let _ = writeln!(s, "  [{mark}] {}{ev}: {}", c.name, check_line(&c.detail));
                }
            }
        }
        Output::Spread(r) => {
            let m = &r.summary;
            let _ = writeln!(
                s,
                "spread of PG({}, {}) from PG({}, {}^{}): {} elements of dimension {}, {} points each, partition verified: {}",
                m.ambient_dim, m.p, m.n, m.p, m.h, m.elements, m.element_dim, m.points_per_element, m.partition_verified
            );
        }
        Output::Blocking(r) => {
            let c = &r.certificate;
            let _ = writeln!(s, "{} point set of size {} in PG({}, {}), k = {}", r.source, c.size, c.n, c.q, c.k);
            let _ = writeln!(s, "blocking {}, minimal {}, small {} (max {})", c.is_blocking, c.is_minimal, c.is_small, c.bounds.small_max);
            for h in &c.residue_histograms {
                let _ = writeln!(s, "  dim {}: {} subspaces, {} skew, residues {:?}", h.dim, h.subspaces, h.skew, h.residues);
            }
            let _ = writeln!(s, "residues 1 mod p: {}", c.residues_one_mod_p);
        }
        Output::Spectrum(r) => {
            let name = match r.code {
                Which::Code => "C_k",
                Which::Dual => "C_k^perp",
                Which::Hull => "hull(C_k)",
            };
            let _ = writeln!(s, "{name}: length {}, dim {}", r.length, r.dim);
            if let Some(d) = &r.distribution {
                for (w, c) in &d.counts {
                    let _ = writeln!(s, "  A_{w} = {c}");
                }
            }
            if let Some(m) = &r.minimum {
                let _ = writeln!(s, "  minimum weight {} (lower bound {}, exact {})", m.weight, m.lower_bound, m.exact);
            }
        }
        Output::List(list) => {
            for t in list {
                let _ = writeln!(s, "{:<18} {}\n{:<18} requires {}", t.id, t.statement, "", t.requires);
            }
        }
    }
    s
}

pub fn csv(o: &Output) -> String {
    let mut s: Rows = csv::Writer::from_writer(Vec::new());
    match o {
        Output::Build(m) => {
            csv_row(&mut s, &["key", "value"]);
            for (k, v) in [
                ("n", m.n as u64),
                ("q", m.q),
                ("k", m.k as u64),
                ("length", m.length as u64),
                ("dim", m.dim as u64),
                ("dual_dim", m.dual_dim as u64),
                ("hull_dim", m.hull_dim as u64),
                ("theta_n", m.theta_n),
                ("theta_k", m.theta_k),
                ("theta_n_minus_k", m.theta_n_minus_k),
            ] {
                csv_row(&mut s, &[k, &v.to_string()]);
            }
        }
        Output::Verify(reports) => {
            csv_row(&mut s, &["id", "verdict", "check", "kind", "passed", "exhaustive", "evidence", "detail"]);
            for r in reports {
                let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                for c in &r.checks {
                    csv_row(
                        &mut s,
                        &[
                            r.id,
                            &verdict,
                            &c.name,
                            kind(&c.detail),
                            &c.passed.to_string(),
                            &c.exhaustive.to_string(),
                            &c.evidence.to_string(),
                            &check_line(&c.detail),
                        ],
                    );
                }
                if r.checks.is_empty() {
                    csv_row(&mut s, &[r.id, &verdict, "", "", "", "", "", ""]);
                }
            }
        }
        Output::Spread(r) => {
            csv_row(&mut s, &["element", "points"]);
            for (e, pts) in r.element_points.iter().enumerate() {
                let p: Vec<String> = pts.iter().map(|x| x.to_string()).collect();
                csv_row(&mut s, &[&e.to_string(), &p.join(" ")]);
            }
        }
        Output::Blocking(r) => {
            csv_row(&mut s, &["dim", "residue", "subspaces"]);
            for h in &r.certificate.residue_histograms {
                for (res, n) in &h.residues {
                    csv_row(&mut s, &[&h.dim.to_string(), &res.to_string(), &n.to_string()]);
                }
            }
        }
        Output::Spectrum(r) => {
            csv_row(&mut s, &["weight", "count"]);
            if let Some(d) = &r.distribution {
                for (w, c) in &d.counts {
                    csv_row(&mut s, &[&w.to_string(), &c.to_string()]);
                }
            }
            if let Some(m) = &r.minimum {
                csv_row(&mut s, &[&m.weight.to_string(), "min"]);
            }
        }
        Output::List(list) => {
            csv_row(&mut s, &["id", "requires", "statement"]);
            for t in list {
                csv_row(&mut s, &[t.id, t.requires, t.statement]);
            }
        }
    }
    String::from_utf8(s.into_inner().expect("flushing to memory")).expect("fields are UTF-8")
}
