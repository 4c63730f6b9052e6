//! Output assembly: fixed-decimal formatting with banker's rounding, CSV and
//! JSON renderings of every census, and the two reference tables plus the
//! constants report that the command-line tool serves.

use num::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::arith::SieveSegment;
use crate::congruence::{CongruenceClassification, SolutionKind};
use crate::densities;
use crate::error::{Error, Result};
use crate::nearperfect::{self, MinExceptions, NearPerfectProfile};
use crate::threshold::{Ell, ThresholdSpec};
use crate::within::{self, WithinCensus};
use crate::ExactRational;

/// Census cutoffs of the normalized within-count grid.
pub const TABLE1_SNAPSHOTS: [u64; 3] = [1_000_000, 10_000_000, 20_000_000];

/// Power-threshold exponents of the grid rows, descending.
pub const TABLE1_EXPONENTS: [(u32, u32); 8] = [
    (9, 10),
    (4, 5),
    (7, 10),
    (3, 5),
    (1, 2),
    (2, 5),
    (3, 10),
    (1, 5),
];

/// Row cutoffs of the exact-census comparison table.
pub const TABLE2_CUTOFFS: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

/// Render with exactly `decimals` places, rounding ties to even (banker's
/// rounding), with no sign on a zero result.
pub fn format_fixed(value: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let units = (value * scale).round_ties_even() as i128;
    let sign = if units < 0 { "-" } else { "" };
    let magnitude = units.unsigned_abs();
    if decimals == 0 {
        return format!("{sign}{magnitude}");
    }
    let split = 10u128.pow(decimals as u32);
    format!(
        "{sign}{}.{:0width$}",
        magnitude / split,
        magnitude % split,
        width = decimals
    )
}

/// A rectangular report: one header row, then string cells. The same table
/// renders to CSV and to JSON so both formats carry identical numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let write_line = |out: &mut String, cells: &[String]| {
            let escaped: Vec<String> = cells.iter().map(|c| csv_escape(c)).collect();
            out.push_str(&escaped.join(","));
            out.push('\n');
        };
        write_line(&mut out, &self.columns);
        for row in &self.rows {
            write_line(&mut out, row);
        }
        out
    }

    /// JSON array of row objects keyed by column name. Cells that are plain
    /// integers or fixed-decimal numbers become JSON numbers; empty cells
    /// become null; anything else stays a string.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert(col.clone(), json_cell(cell));
                }
                Value::Object(obj)
            })
            .collect();
        render_json(&Value::Array(rows))
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn json_cell(cell: &str) -> Value {
    if cell.is_empty() {
        return Value::Null;
    }
    if cell.bytes().all(|b| b.is_ascii_digit() || b == b'-') {
        if let Ok(i) = cell.parse::<i64>() {
            return json!(i);
        }
        if let Ok(u) = cell.parse::<u64>() {
            return json!(u);
        }
    }
    if cell.contains('.') && cell.bytes().all(|b| b.is_ascii_digit() || b == b'-' || b == b'.') {
        if let Ok(f) = cell.parse::<f64>() {
            return json!(f);
        }
    }
    Value::String(cell.to_string())
}

fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory json");
    text.push('\n');
    text
}

fn threshold_columns(t: &ThresholdSpec) -> (String, String) {
    let ratio = |num: u64, den: u64| {
        if den == 1 {
            num.to_string()
        } else {
            format!("{num}/{den}")
        }
    };
    match *t {
        ThresholdSpec::Constant { num, den } => ("constant".into(), ratio(num, den)),
        ThresholdSpec::Power { p, q } => ("power".into(), format!("{p}/{q}")),
        ThresholdSpec::Linear { num, den } => ("linear".into(), ratio(num, den)),
        ThresholdSpec::YOverLogY => ("y-over-log-y".into(), String::new()),
    }
}

/// One row per census: cutoff, ratio, threshold, count, normalized count.
pub fn within_table(censuses: &[WithinCensus]) -> Table {
    let mut table = Table::new(&[
        "n_max",
        "ell_num",
        "ell_den",
        "threshold_kind",
        "threshold_param",
        "count",
        "normalized",
    ]);
    for c in censuses {
        let (kind, param) = threshold_columns(&c.threshold);
        table.push_row(vec![
            c.x.to_string(),
            c.ell.numer().to_string(),
            c.ell.denom().to_string(),
            kind,
            param,
            c.count.to_string(),
            format_fixed(c.normalized(), 6),
        ]);
    }
    table
}

/// One row per classified integer; the splitting (p, m) filled only for
/// regular solutions.
pub fn congruence_table(rows: &[CongruenceClassification]) -> Table {
    let mut table = Table::new(&["n", "k", "b", "kind", "p", "m"]);
    for c in rows {
        let (kind, p, m) = match c.kind {
            SolutionKind::Regular { p, m } => ("regular", p.to_string(), m.to_string()),
            SolutionKind::Sporadic => ("sporadic", String::new(), String::new()),
            SolutionKind::NotASolution => ("not-a-solution", String::new(), String::new()),
        };
        table.push_row(vec![
            c.n.to_string(),
            c.k.to_string(),
            c.b.to_string(),
            kind.to_string(),
            p,
            m,
        ]);
    }
    table
}

fn min_exceptions_cell(m: &MinExceptions) -> String {
    match m {
        MinExceptions::Exact(j) => j.to_string(),
        MinExceptions::MoreThanCap { cap } => format!(">{cap}"),
        MinExceptions::Infinite => "inf".to_string(),
    }
}

fn join_semicolon<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per profiled integer, with the smallest witness spelled out.
pub fn near_table(profiles: &[NearPerfectProfile]) -> Table {
    let mut table = Table::new(&[
        "n",
        "abundance",
        "min_exceptions",
        "achievable_cardinalities",
        "witness_min",
    ]);
    for p in profiles {
        let witness = match p.min_exceptions {
            MinExceptions::Exact(j) => p
                .witnesses
                .get(&j)
                .map(|w| join_semicolon(w.iter()))
                .unwrap_or_default(),
            _ => String::new(),
        };
        table.push_row(vec![
            p.n.to_string(),
            p.abundance.to_string(),
            min_exceptions_cell(&p.min_exceptions),
            join_semicolon(p.achievable.iter()),
            witness,
        ]);
    }
    table
}

/// Sample points of the empirical distribution of σ(n)/n.
pub fn distribution_table(us: &[(u64, u64)], values: &[f64]) -> Table {
    debug_assert_eq!(us.len(), values.len());
    let mut table = Table::new(&["u_num", "u_den", "value"]);
    for (&(num, den), &v) in us.iter().zip(values) {
        table.push_row(vec![
            num.to_string(),
            den.to_string(),
            format_fixed(v, 6),
        ]);
    }
    table
}

/// Deviation histogram with spike ranks: positive deviations are ranked by
/// count (descending, ties to the smaller deviation); zero and negative rows
/// carry no rank.
pub fn spikes_table(rows: &[(i64, u64)]) -> Table {
    let mut order: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].0 >= 1).collect();
    order.sort_by(|&i, &j| rows[j].1.cmp(&rows[i].1).then(rows[i].0.cmp(&rows[j].0)));
    let mut ranks = vec![String::new(); rows.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = (pos + 1).to_string();
    }
    let mut table = Table::new(&["k", "count", "rank"]);
    for (i, &(k, count)) in rows.iter().enumerate() {
        table.push_row(vec![k.to_string(), count.to_string(), ranks[i].clone()]);
    }
    table
}

/// Raw multiplicative data for a sieved range.
pub fn sieve_table(segment: &SieveSegment) -> Table {
    let mut table = Table::new(&[
        "n", "sigma", "tau", "omega", "big_omega", "phi", "mu", "p_plus", "spf",
    ]);
    for r in segment.iter() {
        table.push_row(vec![
            r.n.to_string(),
            r.sigma.to_string(),
            r.tau.to_string(),
            r.small_omega.to_string(),
            r.big_omega.to_string(),
            r.phi.to_string(),
            r.mu.to_string(),
            r.p_plus.to_string(),
            r.spf.to_string(),
        ]);
    }
    table
}

/// The normalized within-count grid (count·ln x/x at ratio 2, power
/// thresholds), with whatever census cutoffs fit under `x_max`.
pub struct Table1Output {
    pub table: Table,
    pub warnings: Vec<String>,
    /// How many of the three census cutoffs the grid actually covers.
    pub complete_columns: usize,
}

pub fn table1(x_max: u64) -> Result<Table1Output> {
    let snapshots: Vec<u64> = TABLE1_SNAPSHOTS
        .iter()
        .copied()
        .filter(|&s| s <= x_max)
        .collect();
    let mut warnings = Vec::new();
    if snapshots.len() < TABLE1_SNAPSHOTS.len() {
        warnings.push(format!(
            "x_max = {x_max} covers {} of {} census cutoffs; the full grid needs x_max >= {}",
            snapshots.len(),
            TABLE1_SNAPSHOTS.len(),
            TABLE1_SNAPSHOTS[TABLE1_SNAPSHOTS.len() - 1],
        ));
    }
    let mut columns = vec!["k_y".to_string()];
    columns.extend(snapshots.iter().map(|s| format!("x={s}")));
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    let thresholds: Vec<ThresholdSpec> = TABLE1_EXPONENTS
        .iter()
        .map(|&(p, q)| ThresholdSpec::power(p, q))
        .collect::<Result<_>>()?;
    let per_snapshot = if snapshots.is_empty() {
        Vec::new()
    } else {
        within::count_within_snapshots(&snapshots, Ell::integer(2)?, &thresholds)?
    };
    for (i, &(p, q)) in TABLE1_EXPONENTS.iter().enumerate() {
        let mut row = vec![format!("y^{}", p as f64 / q as f64)];
        for censuses in &per_snapshot {
            row.push(format_fixed(censuses[i].normalized(), 6));
        }
        table.rows.push(row);
    }
    Ok(Table1Output {
        table,
        warnings,
        complete_columns: snapshots.len(),
    })
}

/// Exact-census comparison rows: per cutoff, the sizes of the two exact
/// censuses and their intersection, plus the intersection's share of each.
pub struct Table2Output {
    pub table: Table,
    /// (cutoff, intersection, exactly-one census, exactly-two census).
    pub row_counts: Vec<(u64, u64, u64, u64)>,
}

pub fn table2(x_max: u64) -> Result<Table2Output> {
    if x_max < *TABLE2_CUTOFFS.last().expect("cutoffs") {
        return Err(Error::invalid(format!(
            "exact-census table needs x_max >= {}",
            TABLE2_CUTOFFS.last().expect("cutoffs")
        )));
    }
    table2_at(&TABLE2_CUTOFFS)
}

/// As [`table2`], over explicit cutoffs (the censuses run once at the
/// largest; membership below a smaller cutoff is independent of the bound).
pub fn table2_at(cutoffs: &[u64]) -> Result<Table2Output> {
    let x = *cutoffs
        .iter()
        .max()
        .ok_or_else(|| Error::invalid("no cutoffs"))?;
    let e1 = nearperfect::census_exact(x, 1)?;
    let e2 = nearperfect::census_exact(x, 2)?;
    let e12 = nearperfect::census_exact_intersection(x, 1, 2)?;
    let mut table = Table::new(&["x", "e_1_2", "e_1", "e_2", "e_1_2_over_e_1", "e_1_2_over_e_2"]);
    let mut row_counts = Vec::new();
    let count_upto = |members: &[u64], cutoff: u64| members.partition_point(|&n| n <= cutoff) as u64;
    for &cutoff in cutoffs {
        let c12 = count_upto(&e12, cutoff);
        let c1 = count_upto(&e1, cutoff);
        let c2 = count_upto(&e2, cutoff);
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                String::new()
            } else {
                format_fixed(num as f64 / den as f64, 3)
            }
        };
        table.push_row(vec![
            cutoff.to_string(),
            c12.to_string(),
            c1.to_string(),
            c2.to_string(),
            ratio(c12, c1),
            ratio(c12, c2),
        ]);
        row_counts.push((cutoff, c12, c1, c2));
    }
    Ok(Table2Output { table, row_counts })
}

/// Inputs of the constants report; the defaults reproduce the full-scale run.
#[derive(Clone, Debug)]
pub struct ConstantsConfig {
    /// Scan bound for the reciprocal sums over ℓ-perfect numbers.
    pub perfect_limit: u64,
    /// Search bound for the per-divisor-count constant assembly.
    pub structured_bound: u64,
    /// Exception budget of the greedy admissible-family scan.
    pub greedy_k: u32,
    /// Cutoff of the greedy admissible-family scan.
    pub greedy_x: u64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            perfect_limit: 100_000_000,
            structured_bound: densities::C_K_SEARCH_BOUND,
            greedy_k: 1,
            greedy_x: 234,
        }
    }
}

fn rational_string(r: &ExactRational) -> String {
    r.to_string()
}

fn limit_label(limit: u64) -> String {
    let mut power = 0u32;
    let mut v = limit;
    while v % 10 == 0 {
        v /= 10;
        power += 1;
    }
    if v == 1 && power > 0 {
        format!("1e{power}")
    } else {
        limit.to_string()
    }
}

/// Every exact constant as one JSON object: the six per-divisor-count
/// constants (exact and decimal), the density lower bound from the greedy
/// admissible family, and the reciprocal sums over 2- and 3-perfect numbers.
pub fn constants_json(cfg: &ConstantsConfig) -> Result<String> {
    let mut map = Map::new();
    for k in 4..=9u32 {
        let c = densities::constant_c_k_with_bound(k, cfg.structured_bound)?;
        let decimal = c.to_f64().unwrap_or(f64::NAN);
        map.insert(format!("c_{k}"), Value::String(rational_string(&c)));
        map.insert(format!("c_{k}_decimal"), json!(decimal));
    }
    let greedy = densities::greedy_admissible(cfg.greedy_k, cfg.greedy_x)?;
    let bound = densities::m_lower_bound(&greedy)?;
    map.insert("M_lower".into(), json!(bound.value));
    map.insert(
        "M_lower_phi_sum".into(),
        Value::String(rational_string(&bound.phi_sum)),
    );
    map.insert("M_lower_members".into(), json!(greedy));
    for ell in [2u64, 3] {
        let sum = densities::sum_inverse_perfect(cfg.perfect_limit, ell)?;
        let label = format!("sum_inv_perfect_{ell}_{}", limit_label(cfg.perfect_limit));
        map.insert(label.clone(), json!(sum.approx));
        map.insert(
            format!("{label}_exact"),
            Value::String(rational_string(&sum.exact)),
        );
        map.insert(format!("{label}_members"), json!(sum.members));
    }
    map.insert(
        "inputs".into(),
        json!({
            "perfect_limit": cfg.perfect_limit,
            "structured_search_bound": cfg.structured_bound,
            "greedy_k": cfg.greedy_k,
            "greedy_x": cfg.greedy_x,
        }),
    );
    Ok(render_json(&Value::Object(map)))
}

/// Growth series of one within-census: counts at every multiple of `step`
/// (plus `x_max` itself), for external plotting of the normalized ratio.
pub fn within_series(
    x_max: u64,
    step: u64,
    ell: Ell,
    threshold: ThresholdSpec,
) -> Result<Table> {
    if step == 0 {
        return Err(Error::invalid("series step must be positive"));
    }
    let mut snapshots: Vec<u64> = (1..)
        .map(|i| i * step)
        .take_while(|&s| s <= x_max)
        .collect();
    if snapshots.last() != Some(&x_max) {
        snapshots.push(x_max);
    }
    snapshots.retain(|&s| s >= 2);
    if snapshots.is_empty() {
        return Err(Error::invalid("series needs a cutoff of at least 2"));
    }
    let per_snapshot = within::count_within_snapshots(&snapshots, ell, &[threshold])?;
    let mut table = Table::new(&["x", "count", "normalized"]);
    for censuses in &per_snapshot {
        let c = &censuses[0];
        table.push_row(vec![
            c.x.to_string(),
            c.count.to_string(),
            format_fixed(c.normalized(), 6),
        ]);
    }
    Ok(table)
}
