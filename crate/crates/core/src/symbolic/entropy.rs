//! Entropy of a presented shift as the log of a spectral radius, with a
//! Collatz–Wielandt bracket computed in exact integer arithmetic.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::shift::ShiftSpace;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERATIONS: usize = 400;
pub const DEFAULT_GAP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyBracket {
    /// `log` of the lower spectral-radius bound.
    pub lower: f64,
    /// `log` of the upper spectral-radius bound.
    pub upper: f64,
    pub radius_lower: f64,
    pub radius_upper: f64,
    /// The bounds coincide as exact rationals.
    pub exact: bool,
    pub iterations: usize,
}

impl EntropyBracket {
    pub fn value(&self) -> f64 {
        if self.exact {
            self.lower
        } else {
            0.5 * (self.lower + self.upper)
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn sft_entropy(shift: &ShiftSpace) -> Result<EntropyBracket> {
    sft_entropy_with(shift, DEFAULT_GAP, DEFAULT_MAX_ITERATIONS)
}

/// Spectral radius of the transition graph, bracketed per strongly connected
/// component by min/max ratios of `(A + I)^{k+1} 1` over `(A + I)^k 1`.
pub fn sft_entropy_with(shift: &ShiftSpace, gap: f64, max_iterations: usize) -> Result<EntropyBracket> {
    let n = shift.state_count();
    if n == 0 {
        return Err(Error::EmptyShift);
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| shift.transitions(i).iter().map(|&(j, _)| j as usize).collect())
        .collect();
    let components = strongly_connected(&adj);
    let mut best: Option<(BigRational, BigRational, usize)> = None;
    for comp in components {
        let single_without_loop = comp.len() == 1 && !adj[comp[0]].contains(&comp[0]);
        if single_without_loop {
            continue;
        }
        let (lo, hi, it) = component_bracket(&adj, &comp, gap, max_iterations);
        best = Some(match best {
            None => (lo, hi, it),
            Some((blo, bhi, bit)) => (blo.max(lo), bhi.max(hi), bit.max(it)),
        });
    }
    // Every component acyclic: the shift would be empty, which pruning excludes.
    let (lo, hi, iterations) = best.ok_or(Error::EmptyShift)?;
    let exact = lo == hi;
    let one = BigRational::one();
    let rl = (lo - &one).to_f64().unwrap_or(f64::NAN);
    let rh = (hi - &one).to_f64().unwrap_or(f64::NAN);
    Ok(EntropyBracket {
        lower: rl.ln(),
        upper: rh.ln(),
        radius_lower: rl,
        radius_upper: rh,
        exact,
        iterations,
    })
}

fn component_bracket(
    adj: &[Vec<usize>],
    comp: &[usize],
    gap: f64,
    max_iterations: usize,
) -> (BigRational, BigRational, usize) {
    let mut pos = vec![usize::MAX; adj.len()];
    for (k, &i) in comp.iter().enumerate() {
        pos[i] = k;
    }
    let local: Vec<Vec<usize>> = comp
        .iter()
        .map(|&i| adj[i].iter().filter(|&&j| pos[j] != usize::MAX).map(|&j| pos[j]).collect())
        .collect();
    let mut x: Vec<BigUint> = vec![BigUint::one(); comp.len()];
    let mut iterations = 0;
    loop {
        // y = (A + I) x
        let y: Vec<BigUint> = local
            .iter()
            .enumerate()
            .map(|(i, out)| out.iter().fold(x[i].clone(), |acc, &j| acc + &x[j]))
            .collect();
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for (a, b) in y.iter().zip(&x) {
            let r = BigRational::new(a.clone().into(), b.clone().into());
            if lo.as_ref().is_none_or(|l| r < *l) {
                lo = Some(r.clone());
            }
            if hi.as_ref().is_none_or(|h| r > *h) {
                hi = Some(r);
            }
        }
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        iterations += 1;
        let done = lo == hi || iterations >= max_iterations || {
            let w = (&hi - &lo).to_f64().unwrap_or(f64::INFINITY);
            w <= gap * lo.to_f64().unwrap_or(1.0)
        };
        if done {
            return (lo, hi, iterations);
        }
        // keep numbers bounded: divide out common powers of two
        let shift = y.iter().map(|v| v.bits()).min().unwrap_or(0).saturating_sub(64);
        x = y.into_iter().map(|v| v >> shift).collect();
        if x.iter().any(|v| v.is_zero()) {
            return (lo, hi, iterations);
        }
    }
}

/// Tarjan's algorithm, iterative; components in reverse topological order.
fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if *k < adj[v].len() {
                let w = adj[v][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    out.push(comp);
                }
            }
        }
    }
    out
}
