//! Exact point counts of relation varieties over F_p.
//!
//! Two engines share one compiled system:
//!
//! * `Exhaustive` walks every assignment of matrices to arrows, rejecting a
//!   partial assignment as soon as a relation involving only assigned
//!   arrows fails.
//! * `LinearFiber` picks a set `F` of arrows occurring at most once in every
//!   relation word. With the other arrows fixed the relations are affine in
//!   the entries of `F`, so each fiber has `p^(dim F - rank)` points or none.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::OracleError;
use crate::model::{ReducedPresentation, Word};
use crate::oracle::field::{check_prime, inv_mod};
use crate::params::Assignment;

/// Largest vertex dimension the fixed-size matrices support.
pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Auto,
    Exhaustive,
    LinearFiber,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Engine::Auto),
            "exhaustive" => Ok(Engine::Exhaustive),
            "fiber" | "linear-fiber" => Ok(Engine::LinearFiber),
            _ => Err(format!("unknown engine '{s}' (expected auto, exhaustive or fiber)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    Invertible,
    Nilpotent,
    Any,
}

/// A constraint on the block endomorphism assembled from `arrows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub arrows: Vec<usize>,
    pub constraint: Constraint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub cap: u128,
    pub jobs: usize,
    pub engine: Engine,
}

pub const DEFAULT_CAP: u128 = 100_000_000;

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            cap: DEFAULT_CAP,
            jobs: 1,
            engine: Engine::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: u128,
    /// The engine that actually ran.
    pub engine: Engine,
    /// Number of enumerated assignments the cap was checked against.
    pub space: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mat {
    rows: usize,
    cols: usize,
    e: [u32; MAX_DIM * MAX_DIM],
}

impl Mat {
    fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            e: [0; MAX_DIM * MAX_DIM],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> u32 {
        self.e[r * self.cols + c]
    }

    fn len(&self) -> usize {
        self.rows * self.cols
    }

    /// `self * rhs`.
    #[inline]
    fn mul(&self, rhs: &Mat, p: u32) -> Mat {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc: u64 = 0;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u64 * rhs.get(k, c) as u64;
                }
                out.e[r * rhs.cols + c] = (acc % p as u64) as u32;
            }
        }
        out
    }

    /// Next matrix in base-p counting order; false after wrapping to zero.
    #[inline]
    fn advance(&mut self, p: u32) -> bool {
        for i in 0..self.len() {
            self.e[i] += 1;
            if self.e[i] < p {
                return true;
            }
            self.e[i] = 0;
        }
        false
    }

    fn from_index(rows: usize, cols: usize, mut idx: u64, p: u32) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for i in 0..m.len() {
            m.e[i] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        m
    }
}

#[derive(Clone, Debug)]
struct Term {
    coeff: u32,
    word: Word,
}

#[derive(Clone, Debug)]
struct Relation {
    rows: usize,
    cols: usize,
    terms: Vec<Term>,
}

/// Relations and matrix shapes with coefficients reduced mod p.
#[derive(Clone, Debug)]
struct System {
    p: u32,
    shapes: Vec<(usize, usize)>,
    relations: Vec<Relation>,
    strata: Vec<CompiledStratum>,
}

#[derive(Clone, Debug)]
struct CompiledStratum {
    arrows: Vec<usize>,
    constraint: Constraint,
    /// `(arrow, row offset, col offset)` inside the block matrix.
    blocks: Vec<(usize, usize, usize)>,
    size: usize,
}

fn checked_space(p: u32, entries: usize) -> u128 {
    (p as u128).checked_pow(entries as u32).unwrap_or(u128::MAX)
}

impl System {
    fn compile(
        pres: &ReducedPresentation,
        alpha: &[u32],
        p: u64,
        assignment: &Assignment,
        strata: &[Stratum],
    ) -> Result<System, OracleError> {
        let pp = check_prime(p)?;
        let q = &pres.quiver;
        if alpha.len() != q.vertices.len() {
            return Err(crate::error::ModelError::DimensionMismatch(alpha.len(), q.vertices.len()).into());
        }
        for &a in alpha {
            if a as usize > MAX_DIM {
                return Err(OracleError::DimensionTooLarge(a, MAX_DIM));
            }
        }
        for name in &q.params {
            if let Some(v) = assignment.get(name) {
                if v % p == 0 {
                    return Err(OracleError::ZeroParameter(name.clone()));
                }
            }
        }
        let shapes: Vec<(usize, usize)> = q
            .arrows
            .iter()
            .map(|a| (alpha[a.target] as usize, alpha[a.source] as usize))
            .collect();
        let mut relations = Vec::new();
        for rel in &pres.relations {
            let rows = alpha[rel.end] as usize;
            let cols = alpha[rel.start] as usize;
            let mut terms = Vec::new();
            for (w, c) in rel.merged() {
                let coeff = c.eval_mod(assignment, pp)?;
                if coeff != 0 {
                    terms.push(Term { coeff, word: w });
                }
            }
            if rows > 0 && cols > 0 && !terms.is_empty() {
                relations.push(Relation { rows, cols, terms });
            }
        }
        let mut compiled = Vec::new();
        for s in strata {
            let mut sources: Vec<usize> = s.arrows.iter().map(|&a| q.arrows[a].source).collect();
            let mut targets: Vec<usize> = s.arrows.iter().map(|&a| q.arrows[a].target).collect();
            sources.sort_unstable();
            sources.dedup();
            targets.sort_unstable();
            targets.dedup();
            if sources != targets {
                return Err(OracleError::NonSquare(q.arrow_names(&s.arrows).join("+")));
            }
            let mut offset = vec![0usize; q.vertices.len()];
            let mut size = 0;
            for &v in &sources {
                offset[v] = size;
                size += alpha[v] as usize;
            }
            let blocks = s
                .arrows
                .iter()
                .map(|&a| (a, offset[q.arrows[a].target], offset[q.arrows[a].source]))
                .collect();
            compiled.push(CompiledStratum {
                arrows: s.arrows.clone(),
                constraint: s.constraint,
                blocks,
                size,
            });
        }
        Ok(System {
            p: pp,
            shapes,
            relations,
            strata: compiled,
        })
    }

    fn entries(&self, a: usize) -> usize {
        self.shapes[a].0 * self.shapes[a].1
    }

    /// `M_last * ... * M_first` for a word, starting from the identity on `cols`.
    #[inline]
    fn eval_word(&self, word: &[usize], cols: usize, mats: &[Mat]) -> Mat {
        let mut acc = Mat::identity(cols);
        for &a in word {
            acc = mats[a].mul(&acc, self.p);
        }
        acc
    }

    fn relation_holds(&self, rel: &Relation, mats: &[Mat]) -> bool {
        let n = rel.rows * rel.cols;
        let mut sum = [0u64; MAX_DIM * MAX_DIM];
        for t in &rel.terms {
            let v = self.eval_word(&t.word, rel.cols, mats);
            for i in 0..n {
                sum[i] += t.coeff as u64 * v.e[i] as u64;
            }
        }
        sum[..n].iter().all(|s| s % self.p as u64 == 0)
    }

    fn stratum_holds(&self, s: &CompiledStratum, mats: &[Mat]) -> bool {
        if s.constraint == Constraint::Any {
            return true;
        }
        let n = s.size;
        let mut block = vec![0u32; n * n];
        for &(a, ro, co) in &s.blocks {
            let m = &mats[a];
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let cell = &mut block[(ro + r) * n + co + c];
                    *cell = (*cell + m.get(r, c)) % self.p;
                }
            }
        }
        match s.constraint {
            Constraint::Invertible => rank_mod(&mut block, n, n, self.p) == n,
            Constraint::Nilpotent => is_nilpotent(&block, n, self.p),
            Constraint::Any => true,
        }
    }
}

/// Rank of a row-major `rows x cols` matrix mod p; the buffer is reduced in place.
fn rank_mod(m: &mut [u32], rows: usize, cols: usize, p: u32) -> usize {
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] != 0) else { continue };
        if pivot != rank {
            for c in 0..cols {
                m.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(m[rank * cols + col], p).expect("pivot nonzero") as u64;
        for c in col..cols {
            m[rank * cols + c] = (m[rank * cols + c] as u64 * inv % p64) as u32;
        }
        for r in 0..rows {
            if r != rank {
                let f = m[r * cols + col] as u64;
                if f != 0 {
                    for c in col..cols {
                        let sub = f * m[rank * cols + c] as u64 % p64;
                        m[r * cols + c] = ((m[r * cols + c] as u64 + p64 - sub) % p64) as u32;
                    }
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn is_nilpotent(m: &[u32], n: usize, p: u32) -> bool {
    if n == 0 {
        return true;
    }
    let mut pow = m.to_vec();
    for _ in 1..n {
        let mut next = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += pow[r * n + k] as u64 * m[k * n + c] as u64;
                }
                next[r * n + c] = (acc % p as u64) as u32;
            }
        }
        pow = next;
    }
    pow.iter().all(|&x| x == 0)
}

/// Checks run after an arrow is assigned: relations and strata whose arrows
/// are all assigned by that point.
struct Plan {
    order: Vec<usize>,
    relation_at: Vec<Vec<usize>>,
    stratum_at: Vec<Vec<usize>>,
    /// Relations with no arrows, checked once.
    constant: Vec<usize>,
}

impl Plan {
    fn new(sys: &System, order: Vec<usize>, relations: &[usize], strata: &[usize]) -> Plan {
        let pos = |a: usize| order.iter().position(|&b| b == a);
        let mut relation_at = vec![Vec::new(); order.len()];
        let mut constant = Vec::new();
        for &r in relations {
            let level = sys.relations[r]
                .terms
                .iter()
                .flat_map(|t| t.word.iter())
                .map(|&a| pos(a).expect("relation arrow enumerated"))
                .max();
            match level {
                Some(l) => relation_at[l].push(r),
                None => constant.push(r),
            }
        }
        let mut stratum_at = vec![Vec::new(); order.len()];
        for &s in strata {
            if let Some(l) = sys.strata[s].arrows.iter().map(|&a| pos(a).expect("stratum arrow")).max() {
                stratum_at[l].push(s);
            }
        }
        Plan {
            order,
            relation_at,
            stratum_at,
            constant,
        }
    }

    fn passes(&self, sys: &System, level: usize, mats: &[Mat]) -> bool {
        self.relation_at[level]
            .iter()
            .all(|&r| sys.relation_holds(&sys.relations[r], mats))
            && self.stratum_at[level]
                .iter()
                .all(|&s| sys.stratum_holds(&sys.strata[s], mats))
    }
}

/// Enumerates `plan.order` from `level` on, calling `leaf` on each surviving
/// full assignment and summing its values.
fn walk<F: Fn(&[Mat]) -> u128>(sys: &System, plan: &Plan, level: usize, mats: &mut [Mat], leaf: &F) -> u128 {
    if level == plan.order.len() {
        return leaf(mats);
    }
    let a = plan.order[level];
    let (rows, cols) = sys.shapes[a];
    let mut m = Mat::zero(rows, cols);
    let mut total = 0u128;
    loop {
        mats[a] = m;
        if plan.passes(sys, level, mats) {
            total += walk(sys, plan, level + 1, mats, leaf);
        }
        if !m.advance(sys.p) {
            break;
        }
    }
    total
}

/// Runs `walk`, splitting the first enumerated arrow across `jobs` workers.
fn run<F: Fn(&[Mat]) -> u128 + Sync>(sys: &System, plan: &Plan, jobs: usize, leaf: F) -> u128 {
    let init: Vec<Mat> = sys.shapes.iter().map(|&(r, c)| Mat::zero(r, c)).collect();
    if !plan.constant.iter().all(|&r| sys.relation_holds(&sys.relations[r], &init)) {
        return 0;
    }
    if plan.order.is_empty() {
        return leaf(&init);
    }
    let first = plan.order[0];
    let (rows, cols) = sys.shapes[first];
    let first_space = (sys.p as u64).pow((rows * cols) as u32);
    let slice = |idx: u64| {
        let mut mats = init.clone();
        mats[first] = Mat::from_index(rows, cols, idx, sys.p);
        if plan.passes(sys, 0, &mats) {
            walk(sys, plan, 1, &mut mats, &leaf)
        } else {
            0
        }
    };
    if jobs <= 1 {
        let mut mats = init.clone();
        return walk(sys, plan, 0, &mut mats, &leaf);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| (0..first_space).into_par_iter().map(slice).sum())
}

/// Largest-dimensional arrow set meeting every relation word at most once.
fn choose_fiber(sys: &System) -> Vec<usize> {
    let n = sys.shapes.len();
    let words: Vec<&Word> = sys.relations.iter().flat_map(|r| r.terms.iter().map(|t| &t.word)).collect();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    if n > 20 {
        return Vec::new();
    }
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let ok = words
            .iter()
            .all(|w| w.iter().filter(|a| set.contains(a)).count() <= 1);
        if !ok {
            continue;
        }
        let dim: usize = set.iter().map(|&a| sys.entries(a)).sum();
        if dim > best.0 {
            best = (dim, set);
        }
    }
    best.1
}

/// Precomputed placement of one term inside the fiber's linear system.
struct FiberTerm {
    coeff: u32,
    prefix: Word,
    fiber: Option<usize>,
    suffix: Word,
}

struct FiberRelation {
    rows: usize,
    cols: usize,
    row_offset: usize,
    terms: Vec<FiberTerm>,
}

struct Fiber {
    relations: Vec<FiberRelation>,
    /// Column offset of each fiber arrow's entries.
    unknown_offset: Vec<Option<usize>>,
    unknowns: usize,
    equations: usize,
}

impl Fiber {
    fn new(sys: &System, fiber: &[usize], linear: &[usize]) -> Fiber {
        let mut unknown_offset = vec![None; sys.shapes.len()];
        let mut unknowns = 0;
        for &a in fiber {
            unknown_offset[a] = Some(unknowns);
            unknowns += sys.entries(a);
        }
        let mut relations = Vec::new();
        let mut equations = 0;
        for &r in linear {
            let rel = &sys.relations[r];
            let terms = rel
                .terms
                .iter()
                .map(|t| match t.word.iter().position(|a| fiber.contains(a)) {
                    Some(i) => FiberTerm {
                        coeff: t.coeff,
                        prefix: t.word[..i].to_vec(),
                        fiber: Some(t.word[i]),
                        suffix: t.word[i + 1..].to_vec(),
                    },
                    None => FiberTerm {
                        coeff: t.coeff,
                        prefix: t.word.clone(),
                        fiber: None,
                        suffix: Vec::new(),
                    },
                })
                .collect();
            relations.push(FiberRelation {
                rows: rel.rows,
                cols: rel.cols,
                row_offset: equations,
                terms,
            });
            equations += rel.rows * rel.cols;
        }
        Fiber {
            relations,
            unknown_offset,
            unknowns,
            equations,
        }
    }

    /// Number of fiber points over a fixed assignment of the other arrows.
    fn points(&self, sys: &System, mats: &[Mat]) -> u128 {
        let p = sys.p as u64;
        let width = self.unknowns + 1;
        let mut m = vec![0u64; self.equations * width];
        for rel in &self.relations {
            for t in &rel.terms {
                match t.fiber {
                    None => {
                        let v = sys.eval_word(&t.prefix, rel.cols, mats);
                        for r in 0..rel.rows {
                            for c in 0..rel.cols {
                                let row = rel.row_offset + r * rel.cols + c;
                                m[row * width + self.unknowns] += t.coeff as u64 * v.get(r, c) as u64;
                            }
                        }
                    }
                    Some(f) => {
                        // S * M_f * P with P the prefix product and S the suffix product.
                        let pre = sys.eval_word(&t.prefix, rel.cols, mats);
                        let (fr, fc) = sys.shapes[f];
                        let suf = sys.eval_word(&t.suffix, fr, mats);
                        let base = self.unknown_offset[f].expect("fiber arrow");
                        for r in 0..rel.rows {
                            for c in 0..rel.cols {
                                let row = rel.row_offset + r * rel.cols + c;
                                for k in 0..fr {
                                    let s = suf.get(r, k) as u64;
                                    if s == 0 {
                                        continue;
                                    }
                                    let sc = t.coeff as u64 * s % p;
                                    for l in 0..fc {
                                        let pv = pre.get(l, c) as u64;
                                        if pv != 0 {
                                            m[row * width + base + k * fc + l] += sc * pv;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut red: Vec<u32> = m.iter().map(|&x| (x % p) as u32).collect();
        let rank_aug = rank_mod(&mut red, self.equations, width, sys.p);
        // After reduction a pivot in the constant column means no solution.
        let inconsistent = (0..rank_aug).any(|r| {
            let row = &red[r * width..(r + 1) * width];
            row[..self.unknowns].iter().all(|&x| x == 0) && row[self.unknowns] != 0
        });
        if inconsistent {
            return 0;
        }
        (sys.p as u128).pow((self.unknowns - rank_aug) as u32)
    }
}

fn count_system(sys: &System, opts: &CountOptions) -> Result<CountResult, OracleError> {
    let all_relations: Vec<usize> = (0..sys.relations.len()).collect();
    let all_strata: Vec<usize> = (0..sys.strata.len()).collect();
    let arrows: Vec<usize> = (0..sys.shapes.len()).collect();
    let total_entries: usize = arrows.iter().map(|&a| sys.entries(a)).sum();

    let fiber = match opts.engine {
        Engine::Exhaustive => Vec::new(),
        // constraints are not affine in the fiber entries
        _ if !sys.strata.is_empty() => Vec::new(),
        _ => choose_fiber(sys),
    };
    if fiber.is_empty() {
        let space = checked_space(sys.p, total_entries);
        if space > opts.cap {
            return Err(OracleError::SearchSpaceTooLarge { space, cap: opts.cap });
        }
        let plan = Plan::new(sys, arrows, &all_relations, &all_strata);
        let count = run(sys, &plan, opts.jobs, |_| 1);
        return Ok(CountResult {
            count,
            engine: Engine::Exhaustive,
            space,
        });
    }
    let outer: Vec<usize> = arrows.iter().copied().filter(|a| !fiber.contains(a)).collect();
    let outer_entries: usize = outer.iter().map(|&a| sys.entries(a)).sum();
    let space = checked_space(sys.p, outer_entries);
    if space > opts.cap {
        return Err(OracleError::SearchSpaceTooLarge { space, cap: opts.cap });
    }
    let (linear, pure): (Vec<usize>, Vec<usize>) = all_relations.iter().partition(|&&r| {
        sys.relations[r]
            .terms
            .iter()
            .any(|t| t.word.iter().any(|a| fiber.contains(a)))
    });
    let plan = Plan::new(sys, outer, &pure, &[]);
    let fib = Fiber::new(sys, &fiber, &linear);
    let count = run(sys, &plan, opts.jobs, |mats| fib.points(sys, mats));
    Ok(CountResult {
        count,
        engine: Engine::LinearFiber,
        space,
    })
}

/// Number of matrix assignments to the arrows of `pres` satisfying every relation.
pub fn count_points(
    pres: &ReducedPresentation,
    alpha: &[u32],
    p: u64,
    assignment: &Assignment,
    opts: &CountOptions,
) -> Result<CountResult, OracleError> {
    let sys = System::compile(pres, alpha, p, assignment, &[])?;
    count_system(&sys, opts)
}

/// As `count_points`, restricted by per-block constraints.
pub fn count_points_stratified(
    pres: &ReducedPresentation,
    alpha: &[u32],
    p: u64,
    assignment: &Assignment,
    strata: &[Stratum],
    opts: &CountOptions,
) -> Result<CountResult, OracleError> {
    let sys = System::compile(pres, alpha, p, assignment, strata)?;
    count_system(&sys, opts)
}
