//! Built-in function registry.
//!
//! The registry is built once and read-only thereafter; unknown names
//! evaluate to #NAME?. Callers may extend a copy of the standard registry
//! with additional functions.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::criteria::{criteria_matches, parse_criteria};
use super::value::{scalar_eq, sort_cmp, Array, ErrorKind, Value};

type BuiltinFn = fn(&[Value]) -> Value;

#[derive(Clone)]
pub struct FunctionSpec {
    pub min_args: usize,
    pub max_args: Option<usize>,
    pub call: BuiltinFn,
}

#[derive(Clone, Default)]
pub struct FunctionRegistry {
    map: HashMap<String, FunctionSpec>,
}

impl FunctionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, min_args: usize, max_args: Option<usize>, call: BuiltinFn) {
        self.map.insert(
            name.to_ascii_uppercase(),
            FunctionSpec {
                min_args,
                max_args,
                call,
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSpec> {
        self.map.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    /// The standard registry: arithmetic aggregates, the criteria family,
    /// dynamic-array functions, logic, and reference helpers.
    pub fn standard() -> Self {
        let mut reg = Self::new();
        reg.register("SUM", 1, None, fn_sum);
        reg.register("AVERAGE", 1, None, fn_average);
        reg.register("COUNT", 1, None, fn_count);
        reg.register("COUNTA", 1, None, fn_counta);
        reg.register("MIN", 1, None, fn_min);
        reg.register("MAX", 1, None, fn_max);
        reg.register("SUMIF", 2, Some(3), fn_sumif);
        reg.register("AVERAGEIF", 2, Some(3), fn_averageif);
        reg.register("COUNTIF", 2, Some(2), fn_countif);
        reg.register("SUMIFS", 3, None, fn_sumifs);
        reg.register("AVERAGEIFS", 3, None, fn_averageifs);
        reg.register("MINIFS", 3, None, fn_minifs);
        reg.register("MAXIFS", 3, None, fn_maxifs);
        reg.register("COUNTIFS", 2, None, fn_countifs);
        reg.register("FILTER", 2, Some(3), fn_filter);
        reg.register("SORT", 1, Some(3), fn_sort);
        reg.register("SORTBY", 2, Some(3), fn_sortby);
        reg.register("UNIQUE", 1, Some(1), fn_unique);
        reg.register("HSTACK", 1, None, fn_hstack);
        reg.register("VSTACK", 1, None, fn_vstack);
        reg.register("IF", 2, Some(3), fn_if);
        reg.register("AND", 1, None, fn_and);
        reg.register("OR", 1, None, fn_or);
        reg.register("NOT", 1, Some(1), fn_not);
        reg.register("ABS", 1, Some(1), fn_abs);
        reg.register("ROUND", 2, Some(2), fn_round);
        reg.register("LARGE", 2, Some(2), fn_large);
        reg.register("SMALL", 2, Some(2), fn_small);
        reg.register("ROWS", 1, Some(1), fn_rows);
        reg.register("COLUMNS", 1, Some(1), fn_columns);
        reg.register("INDEX", 2, Some(3), fn_index);
        reg
    }
}

/// Shared read-only instance of the standard registry.
pub fn standard_registry() -> &'static FunctionRegistry {
    static REGISTRY: OnceLock<FunctionRegistry> = OnceLock::new();
    REGISTRY.get_or_init(FunctionRegistry::standard)
}

// ---------------------------------------------------------------------------
// aggregate helpers

/// Gather the numeric content of the arguments. Direct scalar arguments
/// coerce (booleans to 1/0, numeric text parses, blanks are skipped);
/// non-numeric elements inside arrays are ignored, as Excel aggregates do.
fn collect_numbers(args: &[Value]) -> Result<Vec<f64>, ErrorKind> {
    let mut out = Vec::new();
    for arg in args {
        match arg {
            Value::Array(a) => {
                for el in a.iter() {
                    if let Value::Number(n) = el {
                        out.push(*n);
                    }
                }
            }
            Value::Blank => {}
            scalar => out.push(scalar.to_number()?),
        }
    }
    Ok(out)
}

fn fn_sum(args: &[Value]) -> Value {
    match collect_numbers(args) {
        Ok(nums) => Value::Number(nums.iter().sum()),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_average(args: &[Value]) -> Value {
    match collect_numbers(args) {
        Ok(nums) if nums.is_empty() => Value::Error(ErrorKind::Div0),
        Ok(nums) => Value::Number(nums.iter().sum::<f64>() / nums.len() as f64),
        Err(kind) => Value::Error(kind),
    }
}

/// MIN/MAX over no numbers yield 0, per spreadsheet convention.
fn reduce_or_zero(nums: Vec<f64>, pick: fn(f64, f64) -> f64) -> Value {
    match nums.split_first() {
        None => Value::Number(0.0),
        Some((&first, rest)) => Value::Number(rest.iter().fold(first, |acc, &n| pick(acc, n))),
    }
}

fn fn_min(args: &[Value]) -> Value {
    match collect_numbers(args) {
        Ok(nums) => reduce_or_zero(nums, f64::min),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_max(args: &[Value]) -> Value {
    match collect_numbers(args) {
        Ok(nums) => reduce_or_zero(nums, f64::max),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_count(args: &[Value]) -> Value {
    let mut n = 0usize;
    for arg in args {
        match arg {
            Value::Array(a) => {
                n += a.iter().filter(|el| matches!(el, Value::Number(_))).count();
            }
            Value::Number(_) | Value::Bool(_) => n += 1,
            Value::Text(s) if s.trim().parse::<f64>().is_ok() => n += 1,
            _ => {}
        }
    }
    Value::Number(n as f64)
}

fn fn_counta(args: &[Value]) -> Value {
    let mut n = 0usize;
    for arg in args {
        match arg {
            Value::Array(a) => {
                n += a.iter().filter(|el| !matches!(el, Value::Blank)).count();
            }
            Value::Blank => {}
            _ => n += 1,
        }
    }
    Value::Number(n as f64)
}

// ---------------------------------------------------------------------------
// criteria aggregates

struct CriteriaPairs {
    len: usize,
    mask: Vec<bool>,
}

/// Evaluate `(range, criteria)` pairs into a joint match mask. All ranges
/// must share one shape.
fn criteria_mask(pairs: &[Value], want_shape: Option<(usize, usize)>) -> Result<CriteriaPairs, ErrorKind> {
    debug_assert!(pairs.len() % 2 == 0 && !pairs.is_empty());
    let mut mask: Option<Vec<bool>> = None;
    let mut shape = want_shape;
    for pair in pairs.chunks(2) {
        let Value::Array(range) = &pair[0] else {
            return Err(ErrorKind::Value);
        };
        match shape {
            None => shape = Some((range.n_rows(), range.n_cols())),
            Some(s) if s == (range.n_rows(), range.n_cols()) => {}
            Some(_) => return Err(ErrorKind::Value),
        }
        if !pair[1].is_scalar() {
            return Err(ErrorKind::Value);
        }
        let crit = parse_criteria(&pair[1]);
        let m = mask.get_or_insert_with(|| vec![true; range.len()]);
        for (i, cell) in range.iter().enumerate() {
            m[i] = m[i] && criteria_matches(&crit, cell);
        }
    }
    let mask = mask.unwrap();
    Ok(CriteriaPairs {
        len: mask.len(),
        mask,
    })
}

fn matched_numbers(target: &Array, mask: &[bool]) -> Vec<f64> {
    target
        .iter()
        .zip(mask)
        .filter_map(|(cell, &keep)| match cell {
            Value::Number(n) if keep => Some(*n),
            _ => None,
        })
        .collect()
}

/// SUMIF/AVERAGEIF/COUNTIF: single criteria over one range, with an
/// optional separate target range.
fn if_family(args: &[Value], agg: fn(Vec<f64>, usize) -> Value, counting: bool) -> Value {
    let Value::Array(range) = &args[0] else {
        return Value::Error(ErrorKind::Value);
    };
    if !args[1].is_scalar() {
        return Value::Error(ErrorKind::Value);
    }
    let crit = parse_criteria(&args[1]);
    let mask: Vec<bool> = range.iter().map(|c| criteria_matches(&crit, c)).collect();
    if counting {
        return Value::Number(mask.iter().filter(|&&b| b).count() as f64);
    }
    let target = match args.get(2) {
        Some(Value::Array(t)) => t,
        Some(_) => return Value::Error(ErrorKind::Value),
        None => range,
    };
    if (target.n_rows(), target.n_cols()) != (range.n_rows(), range.n_cols()) {
        return Value::Error(ErrorKind::Value);
    }
    let matched = matched_numbers(target, &mask);
    let n_matched = mask.iter().filter(|&&b| b).count();
    agg(matched, n_matched)
}

fn agg_sum(nums: Vec<f64>, _matched: usize) -> Value {
    Value::Number(nums.iter().sum())
}

fn agg_average(nums: Vec<f64>, _matched: usize) -> Value {
    if nums.is_empty() {
        Value::Error(ErrorKind::Div0)
    } else {
        Value::Number(nums.iter().sum::<f64>() / nums.len() as f64)
    }
}

fn agg_min(nums: Vec<f64>, _matched: usize) -> Value {
    reduce_or_zero(nums, f64::min)
}

fn agg_max(nums: Vec<f64>, _matched: usize) -> Value {
    reduce_or_zero(nums, f64::max)
}

fn fn_sumif(args: &[Value]) -> Value {
    if_family(args, agg_sum, false)
}

fn fn_averageif(args: &[Value]) -> Value {
    if_family(args, agg_average, false)
}

fn fn_countif(args: &[Value]) -> Value {
    if_family(args, agg_sum, true)
}

/// SUMIFS-style: target range first, then `(range, criteria)` pairs.
fn ifs_family(args: &[Value], agg: fn(Vec<f64>, usize) -> Value) -> Value {
    if args.len() % 2 == 0 {
        return Value::Error(ErrorKind::Value);
    }
    let Value::Array(target) = &args[0] else {
        return Value::Error(ErrorKind::Value);
    };
    let pairs = match criteria_mask(&args[1..], Some((target.n_rows(), target.n_cols()))) {
        Ok(p) => p,
        Err(kind) => return Value::Error(kind),
    };
    let matched = matched_numbers(target, &pairs.mask);
    let n_matched = pairs.mask.iter().filter(|&&b| b).count();
    agg(matched, n_matched)
}

fn fn_sumifs(args: &[Value]) -> Value {
    ifs_family(args, agg_sum)
}

fn fn_averageifs(args: &[Value]) -> Value {
    ifs_family(args, agg_average)
}

fn fn_minifs(args: &[Value]) -> Value {
    ifs_family(args, agg_min)
}

fn fn_maxifs(args: &[Value]) -> Value {
    ifs_family(args, agg_max)
}

fn fn_countifs(args: &[Value]) -> Value {
    if args.len() % 2 != 0 {
        return Value::Error(ErrorKind::Value);
    }
    let pairs = match criteria_mask(args, None) {
        Ok(p) => p,
        Err(kind) => return Value::Error(kind),
    };
    let _ = pairs.len;
    Value::Number(pairs.mask.iter().filter(|&&b| b).count() as f64)
}

// ---------------------------------------------------------------------------
// dynamic arrays

fn include_flag(v: &Value) -> Result<bool, ErrorKind> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) => Ok(*n != 0.0),
        Value::Blank => Ok(false),
        _ => Err(ErrorKind::Value),
    }
}

fn fn_filter(args: &[Value]) -> Value {
    let source = match args[0].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let include = match args[1].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let flags: Result<Vec<bool>, ErrorKind> = include.iter().map(include_flag).collect();
    let flags = match flags {
        Ok(f) => f,
        Err(kind) => return Value::Error(kind),
    };

    if include.n_cols() == 1 && include.n_rows() == source.n_rows() {
        let rows: Vec<Vec<Value>> = source
            .rows()
            .zip(&flags)
            .filter(|(_, &keep)| keep)
            .map(|(row, _)| row.to_vec())
            .collect();
        if rows.is_empty() {
            return match args.get(2) {
                Some(fallback) => fallback.clone(),
                None => Value::Error(ErrorKind::Calc),
            };
        }
        Value::Array(Array::from_rows(rows))
    } else if include.n_rows() == 1 && include.n_cols() == source.n_cols() {
        let kept: Vec<usize> = (0..source.n_cols()).filter(|&c| flags[c]).collect();
        if kept.is_empty() {
            return match args.get(2) {
                Some(fallback) => fallback.clone(),
                None => Value::Error(ErrorKind::Calc),
            };
        }
        let rows: Vec<Vec<Value>> = (0..source.n_rows())
            .map(|r| kept.iter().map(|&c| source.get(r, c).clone()).collect())
            .collect();
        Value::Array(Array::from_rows(rows))
    } else {
        Value::Error(ErrorKind::Value)
    }
}

fn sorted_row_order(
    n_rows: usize,
    key: impl Fn(usize) -> Value,
    ascending: bool,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        if ascending {
            sort_cmp(&ka, &kb)
        } else {
            sort_cmp(&kb, &ka)
        }
    });
    order
}

fn sort_order_flag(v: &Value) -> Result<bool, ErrorKind> {
    match v.to_number() {
        Ok(n) if n == 1.0 => Ok(true),
        Ok(n) if n == -1.0 => Ok(false),
        Ok(_) => Err(ErrorKind::Value),
        Err(kind) => Err(kind),
    }
}

fn fn_sort(args: &[Value]) -> Value {
    let source = match args[0].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let index = match args.get(1) {
        Some(v) => match v.to_number() {
            Ok(n) if n >= 1.0 && (n as usize) <= source.n_cols() => n as usize,
            Ok(_) => return Value::Error(ErrorKind::Value),
            Err(kind) => return Value::Error(kind),
        },
        None => 1,
    };
    let ascending = match args.get(2) {
        Some(v) => match sort_order_flag(v) {
            Ok(asc) => asc,
            Err(kind) => return Value::Error(kind),
        },
        None => true,
    };
    let order = sorted_row_order(source.n_rows(), |r| source.get(r, index - 1).clone(), ascending);
    let rows: Vec<Vec<Value>> = order.iter().map(|&r| source.row(r).to_vec()).collect();
    Value::Array(Array::from_rows(rows))
}

fn fn_sortby(args: &[Value]) -> Value {
    let source = match args[0].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let by = match args[1].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    if by.n_cols() != 1 || by.n_rows() != source.n_rows() {
        return Value::Error(ErrorKind::Value);
    }
    let ascending = match args.get(2) {
        Some(v) => match sort_order_flag(v) {
            Ok(asc) => asc,
            Err(kind) => return Value::Error(kind),
        },
        None => true,
    };
    let order = sorted_row_order(source.n_rows(), |r| by.get(r, 0).clone(), ascending);
    let rows: Vec<Vec<Value>> = order.iter().map(|&r| source.row(r).to_vec()).collect();
    Value::Array(Array::from_rows(rows))
}

fn fn_unique(args: &[Value]) -> Value {
    let source = match args[0].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let mut rows: Vec<Vec<Value>> = Vec::new();
    for row in source.rows() {
        let seen = rows
            .iter()
            .any(|kept| kept.iter().zip(row).all(|(a, b)| scalar_eq(a, b)));
        if !seen {
            rows.push(row.to_vec());
        }
    }
    Value::Array(Array::from_rows(rows))
}

fn fn_hstack(args: &[Value]) -> Value {
    let mut parts = Vec::with_capacity(args.len());
    for arg in args {
        match arg.clone().into_array() {
            Ok(a) => parts.push(a),
            Err(kind) => return Value::Error(kind),
        }
    }
    let n_rows = parts[0].n_rows();
    if parts.iter().any(|p| p.n_rows() != n_rows) {
        return Value::Error(ErrorKind::Value);
    }
    let rows: Vec<Vec<Value>> = (0..n_rows)
        .map(|r| {
            parts
                .iter()
                .flat_map(|p| p.row(r).iter().cloned())
                .collect()
        })
        .collect();
    Value::Array(Array::from_rows(rows))
}

fn fn_vstack(args: &[Value]) -> Value {
    let mut parts = Vec::with_capacity(args.len());
    for arg in args {
        match arg.clone().into_array() {
            Ok(a) => parts.push(a),
            Err(kind) => return Value::Error(kind),
        }
    }
    let n_cols = parts[0].n_cols();
    if parts.iter().any(|p| p.n_cols() != n_cols) {
        return Value::Error(ErrorKind::Value);
    }
    let rows: Vec<Vec<Value>> = parts
        .iter()
        .flat_map(|p| p.rows().map(<[Value]>::to_vec))
        .collect();
    Value::Array(Array::from_rows(rows))
}

// ---------------------------------------------------------------------------
// logic and scalar math

fn fn_if(args: &[Value]) -> Value {
    match &args[0] {
        Value::Array(cond) => {
            // Element-wise broadcast: branch values may be scalars or arrays
            // of the condition's shape.
            let branch = |v: Option<&Value>, r: usize, c: usize| -> Result<Value, ErrorKind> {
                match v {
                    None => Ok(Value::Bool(false)),
                    Some(Value::Array(a)) => {
                        if (a.n_rows(), a.n_cols()) == (cond.n_rows(), cond.n_cols()) {
                            Ok(a.get(r, c).clone())
                        } else {
                            Err(ErrorKind::Value)
                        }
                    }
                    Some(scalar) => Ok(scalar.clone()),
                }
            };
            let mut cells = Vec::with_capacity(cond.len());
            for r in 0..cond.n_rows() {
                for c in 0..cond.n_cols() {
                    let flag = match cond.get(r, c).truthy() {
                        Ok(b) => b,
                        Err(kind) => return Value::Error(kind),
                    };
                    let chosen = if flag {
                        branch(Some(&args[1]), r, c)
                    } else {
                        branch(args.get(2), r, c)
                    };
                    match chosen {
                        Ok(v) => cells.push(v),
                        Err(kind) => return Value::Error(kind),
                    }
                }
            }
            Value::Array(Array::new(cond.n_rows(), cond.n_cols(), cells))
        }
        scalar => match scalar.truthy() {
            Ok(true) => args[1].clone(),
            Ok(false) => args.get(2).cloned().unwrap_or(Value::Bool(false)),
            Err(kind) => Value::Error(kind),
        },
    }
}

/// Collect boolean flags for AND/OR: direct scalars coerce, array elements
/// contribute only logical and numeric values.
fn collect_flags(args: &[Value]) -> Result<Vec<bool>, ErrorKind> {
    let mut out = Vec::new();
    for arg in args {
        match arg {
            Value::Array(a) => {
                for el in a.iter() {
                    match el {
                        Value::Bool(b) => out.push(*b),
                        Value::Number(n) => out.push(*n != 0.0),
                        _ => {}
                    }
                }
            }
            Value::Blank => {}
            scalar => out.push(scalar.truthy()?),
        }
    }
    if out.is_empty() {
        Err(ErrorKind::Value)
    } else {
        Ok(out)
    }
}

fn fn_and(args: &[Value]) -> Value {
    match collect_flags(args) {
        Ok(flags) => Value::Bool(flags.into_iter().all(|b| b)),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_or(args: &[Value]) -> Value {
    match collect_flags(args) {
        Ok(flags) => Value::Bool(flags.into_iter().any(|b| b)),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_not(args: &[Value]) -> Value {
    match args[0].truthy() {
        Ok(b) => Value::Bool(!b),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_abs(args: &[Value]) -> Value {
    match args[0].to_number() {
        Ok(n) => Value::Number(n.abs()),
        Err(kind) => Value::Error(kind),
    }
}

fn fn_round(args: &[Value]) -> Value {
    let x = match args[0].to_number() {
        Ok(n) => n,
        Err(kind) => return Value::Error(kind),
    };
    let digits = match args[1].to_number() {
        Ok(n) => n.trunc(),
        Err(kind) => return Value::Error(kind),
    };
    let factor = 10f64.powf(digits);
    // f64::round rounds half away from zero, matching spreadsheet ROUND.
    Value::Number((x * factor).round() / factor)
}

fn kth(args: &[Value], largest: bool) -> Value {
    let mut nums = match collect_numbers(&args[..1]) {
        Ok(nums) => nums,
        Err(kind) => return Value::Error(kind),
    };
    let k = match args[1].to_number() {
        Ok(n) => n,
        Err(kind) => return Value::Error(kind),
    };
    if k < 1.0 || (k.floor() as usize) > nums.len() {
        return Value::Error(ErrorKind::Num);
    }
    nums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if largest {
        nums.reverse();
    }
    Value::Number(nums[k.floor() as usize - 1])
}

fn fn_large(args: &[Value]) -> Value {
    kth(args, true)
}

fn fn_small(args: &[Value]) -> Value {
    kth(args, false)
}

fn fn_rows(args: &[Value]) -> Value {
    match &args[0] {
        Value::Array(a) => Value::Number(a.n_rows() as f64),
        Value::Error(kind) => Value::Error(*kind),
        _ => Value::Number(1.0),
    }
}

fn fn_columns(args: &[Value]) -> Value {
    match &args[0] {
        Value::Array(a) => Value::Number(a.n_cols() as f64),
        Value::Error(kind) => Value::Error(*kind),
        _ => Value::Number(1.0),
    }
}

fn fn_index(args: &[Value]) -> Value {
    let source = match args[0].clone().into_array() {
        Ok(a) => a,
        Err(kind) => return Value::Error(kind),
    };
    let first = match args[1].to_number() {
        Ok(n) if n >= 0.0 => n.floor() as usize,
        Ok(_) => return Value::Error(ErrorKind::Value),
        Err(kind) => return Value::Error(kind),
    };
    let second = match args.get(2) {
        Some(v) => match v.to_number() {
            Ok(n) if n >= 0.0 => Some(n.floor() as usize),
            Ok(_) => return Value::Error(ErrorKind::Value),
            Err(kind) => return Value::Error(kind),
        },
        None => None,
    };

    let (row, col) = match second {
        Some(col) => (first, col),
        // With a single index, vectors index along their length; for a
        // two-dimensional array the index selects a whole row.
        None => {
            if source.n_rows() == 1 && source.n_cols() > 1 {
                (1, first)
            } else {
                (first, if source.n_cols() == 1 { 1 } else { 0 })
            }
        }
    };

    if row > source.n_rows() || col > source.n_cols() {
        return Value::Error(ErrorKind::Ref);
    }
    match (row, col) {
        (0, 0) => Value::Array(source),
        (0, c) => Value::Array(Array::column(
            (0..source.n_rows()).map(|r| source.get(r, c - 1).clone()).collect(),
        )),
        (r, 0) => Value::Array(Array::new(1, source.n_cols(), source.row(r - 1).to_vec())),
        (r, c) => source.get(r - 1, c - 1).clone(),
    }
}
