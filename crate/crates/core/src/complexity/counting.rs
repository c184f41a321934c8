use crate::spectra::EigenSequence;
use crate::{Error, Result, REL_TIE};

use super::{ComplexityQuery, ComplexityResult, CountKind, CountMethod, InfoClass, COUNT_CAP};

/// Largest `truncation_index^d` the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Cap on the number of distinct products `en_all` will materialize.
const EN_ALL_LIMIT: usize = 5_000_000;

fn require_all(query: &ComplexityQuery) -> Result<()> {
    if query.info_class != InfoClass::All {
        return Err(Error::Precondition(
            "eigenvalue counting only determines complexity for arbitrary linear information".into(),
        ));
    }
    Ok(())
}

/// Indices (0-based, a prefix of the list) whose eigenvalue can occur in a
/// product exceeding the threshold, checking that the list is deep enough.
fn participating_prefix(eigs: &EigenSequence, exceeds: impl Fn(f64) -> bool) -> Result<usize> {
    let values = eigs.values();
    let n = values.iter().take_while(|&&v| exceeds(v)).count();
    if n == values.len() && !eigs.is_exhaustive() {
        return Err(Error::Truncation {
            reason: format!("all {} listed eigenvalues lie above the counting threshold", values.len()),
            required: values.len() + 1,
        });
    }
    Ok(n)
}

/// Exact `n(eps, S_d, all)`: the number of index tuples `(j_1, ..., j_d)` with
/// `prod lambda_{j_k} > eps^2 lambda_1^d`, products within [`REL_TIE`] of the
/// threshold counting as not exceeding it.
///
/// Works with weights `w_j = ln(lambda_1 / lambda_j)` against the budget
/// `2 ln(1/eps)`. Indices tied with `lambda_1` have weight zero and fill any
/// slot for free, so the search runs over nondecreasing multisets of the
/// remaining indices only and weights each by
/// `C(d, k) m0^{d-k} k! / prod(mult!)`, `m0` being the multiplicity of the top.
pub fn count_info_complexity_all(eigs: &EigenSequence, query: &ComplexityQuery) -> Result<ComplexityResult> {
    require_all(query)?;
    let lambda1 = eigs.lambda1();
    let budget = 2.0 * (1.0 / query.eps).ln() - REL_TIE.ln_1p();
    let weight = |v: f64| {
        if v >= lambda1 * (1.0 - REL_TIE) {
            0.0
        } else if v > 0.0 {
            (lambda1 / v).ln()
        } else {
            f64::INFINITY
        }
    };
    let truncation_index = participating_prefix(eigs, |v| weight(v) < budget)?;
    let weights: Vec<f64> = eigs.values()[..truncation_index].iter().map(|&v| weight(v)).collect();
    let top = weights.iter().take_while(|&&w| w == 0.0).count() as u128;
    let rest = &weights[top as usize..];

    let d = query.d;
    let mut search = MultisetSearch {
        rest,
        budget,
        d,
        binom: binomial_row(d),
        top_powers: powers(top, d),
        total: 0,
        overflow: false,
    };
    search.visit(0, 0, 0.0, 1, 0);
    let (count, saturated) = saturate(search.total, search.overflow);
    Ok(ComplexityResult {
        count,
        kind: CountKind::Exact,
        saturated,
        truncation_index,
        tie_tolerance: REL_TIE,
        method: CountMethod::DfsMultiset,
    })
}

struct MultisetSearch<'a> {
    rest: &'a [f64],
    budget: f64,
    d: usize,
    binom: Vec<Option<u128>>,
    top_powers: Vec<Option<u128>>,
    total: u128,
    overflow: bool,
}

impl MultisetSearch<'_> {
    /// `size` elements chosen so far with weight sum `used`; `perms` is the number
    /// of distinct orderings of the chosen multiset, `run` the multiplicity of its
    /// last element (`start` is that element's index).
    fn visit(&mut self, start: usize, size: usize, used: f64, perms: u128, run: u128) {
        let term = self.binom[size]
            .and_then(|b| b.checked_mul(self.top_powers[self.d - size]?))
            .and_then(|t| t.checked_mul(perms));
        match term.and_then(|t| self.total.checked_add(t)) {
            Some(total) => self.total = total,
            None => self.overflow = true,
        }
        if size == self.d {
            return;
        }
        for i in start..self.rest.len() {
            let next = used + self.rest[i];
            // weights are nondecreasing, so no later index fits either
            if !(next < self.budget) {
                break;
            }
            let new_run = if i == start && size > 0 { run + 1 } else { 1 };
            let new_perms = perms.checked_mul(size as u128 + 1).map(|p| p / new_run);
            match new_perms {
                Some(p) => self.visit(i, size + 1, next, p, new_run),
                None => {
                    self.overflow = true;
                    return;
                }
            }
        }
    }
}

fn binomial_row(d: usize) -> Vec<Option<u128>> {
    let mut row = Vec::with_capacity(d + 1);
    let mut c: Option<u128> = Some(1);
    row.push(c);
    for k in 1..=d {
        // C(d, k) = C(d, k-1) (d - k + 1) / k; exact because C(d,k-1)(d-k+1) = k C(d,k)
        c = c.and_then(|v| v.checked_mul((d - k + 1) as u128)).map(|v| v / k as u128);
        row.push(c);
    }
    row
}

fn powers(base: u128, max_exp: usize) -> Vec<Option<u128>> {
    let mut out = Vec::with_capacity(max_exp + 1);
    let mut p = Some(1u128);
    out.push(p);
    for _ in 0..max_exp {
        p = p.and_then(|v| v.checked_mul(base));
        out.push(p);
    }
    out
}

fn saturate(total: u128, overflow: bool) -> (u64, bool) {
    if overflow || total > COUNT_CAP as u128 {
        (COUNT_CAP, true)
    } else {
        (total as u64, false)
    }
}

/// Literal enumeration of all `d`-tuples over the participating prefix, comparing
/// products directly. Oracle for [`count_info_complexity_all`].
pub fn brute_force_count(eigs: &EigenSequence, query: &ComplexityQuery) -> Result<ComplexityResult> {
    require_all(query)?;
    let d = query.d;
    if d > 4 {
        return Err(Error::ResourceLimit(format!("brute force is limited to d <= 4, got {d}")));
    }
    let lambda1 = eigs.lambda1();
    let top = lambda1.powi(d as i32);
    let threshold = query.eps * query.eps * top * (1.0 + REL_TIE);
    let head = lambda1.powi(d as i32 - 1);
    let n = participating_prefix(eigs, |v| v * head > threshold)?;
    let space = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if space > BRUTE_FORCE_LIMIT {
        return Err(Error::ResourceLimit(format!("{n}^{d} tuples exceed the brute-force limit")));
    }
    let values = &eigs.values()[..n];
    let mut idx = vec![0usize; d];
    let mut count: u64 = 0;
    if n > 0 {
        loop {
            let product: f64 = idx.iter().map(|&i| values[i]).product();
            if product > threshold {
                count += 1;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == d {
                    break;
                }
            }
            if pos == d {
                break;
            }
        }
    }
    Ok(ComplexityResult {
        count,
        kind: CountKind::Exact,
        saturated: false,
        truncation_index: n,
        tie_tolerance: REL_TIE,
        method: CountMethod::DirectEnum,
    })
}

/// `n(eps, S_d, class)`: exact for arbitrary linear information, a lower bound
/// for function values (which can never beat linear information).
pub fn information_complexity(eigs: &EigenSequence, query: &ComplexityQuery) -> Result<ComplexityResult> {
    let all = ComplexityQuery { info_class: InfoClass::All, ..*query };
    let mut result = count_info_complexity_all(eigs, &all)?;
    if query.info_class == InfoClass::Std {
        result.kind = CountKind::LowerBound;
    }
    Ok(result)
}

/// `e_n(S_d, all) = sqrt(lambda_{d, n+1})`, the square root of the `(n+1)`-th
/// largest product eigenvalue.
pub fn en_all(eigs: &EigenSequence, d: usize, n: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension d must be at least 1".into()));
    }
    let lambda1 = eigs.lambda1();
    if n == 0 {
        return Ok(lambda1.powf(d as f64 / 2.0));
    }
    let values = eigs.values();
    // Every tuple that touches an unlisted index has product at most this.
    let floor = if eigs.is_exhaustive() { 0.0 } else { values[values.len() - 1] * lambda1.powi(d as i32 - 1) };

    let mut products: Vec<(f64, u128)> = Vec::new();
    let mut stack_fact = vec![1u128; d + 1];
    for k in 1..=d {
        stack_fact[k] = stack_fact[k - 1].saturating_mul(k as u128);
    }
    let mut enumerator = ProductEnumerator { values, floor, d, products: &mut products, overflow: false };
    enumerator.visit(0, 0, 1.0, 1, 0)?;
    let overflow = enumerator.overflow;

    products.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut seen: u128 = 0;
    for &(value, mult) in &products {
        seen = seen.saturating_add(mult);
        if seen > n as u128 {
            return Ok(value.sqrt());
        }
    }
    if overflow {
        return Err(Error::ResourceLimit("product multiplicities overflowed".into()));
    }
    if eigs.is_exhaustive() {
        return Ok(0.0);
    }
    Err(Error::Truncation {
        reason: format!(
            "only {seen} products are resolved above {floor:e}; rank {} needs a deeper univariate list",
            n + 1
        ),
        required: values.len() + 1,
    })
}

struct ProductEnumerator<'a> {
    values: &'a [f64],
    floor: f64,
    d: usize,
    products: &'a mut Vec<(f64, u128)>,
    overflow: bool,
}

impl ProductEnumerator<'_> {
    fn visit(&mut self, start: usize, size: usize, product: f64, perms: u128, run: u128) -> Result<()> {
        if size == self.d {
            self.products.push((product, perms));
            if self.products.len() > EN_ALL_LIMIT {
                return Err(Error::ResourceLimit(format!(
                    "more than {EN_ALL_LIMIT} distinct products above the resolution floor"
                )));
            }
            return Ok(());
        }
        let remaining = (self.d - size) as i32;
        for i in start..self.values.len() {
            let v = self.values[i];
            // all remaining factors are at most v
            if !(product * v.powi(remaining) > self.floor) {
                break;
            }
            let new_run = if i == start && size > 0 { run + 1 } else { 1 };
            let new_perms = match perms.checked_mul(size as u128 + 1) {
                Some(p) => p / new_run,
                None => {
                    self.overflow = true;
                    u128::MAX
                }
            };
            self.visit(i, size + 1, product * v, new_perms, new_run)?;
        }
        Ok(())
    }
}
