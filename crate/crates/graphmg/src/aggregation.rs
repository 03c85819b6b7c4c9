//! Vote-based aggregation.
//!
//! Vertices start `Undecided`. Each round, every vertex broadcasts its state
//! over the filtered strength graph and each undecided vertex keeps the best
//! incoming message: seeds beat undecided vertices, which beat decided ones;
//! ties fall to the heavier edge and then to the smaller vertex index. A
//! message from a seed decides the receiver immediately; a message from
//! another undecided vertex casts a vote for it. Vertices that accumulate
//! enough votes across rounds become seeds. Whatever is left unassigned after
//! the last round forms singleton aggregates.
//!
//! All tie-breaks are on total orders over `(state, weight, index)`, so the
//! per-row reduction is commutative and the outcome cannot depend on how the
//! matrix is blocked.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::sparse::dist::{spmv_semiring, BlockLayout, DistMatrix};
use crate::sparse::semiring::Semiring;
use crate::sparse::SparseMatrix;

/// Aggregation state of one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexStatus {
    /// Not yet assigned; may vote and be voted for.
    Undecided,
    /// Will be a coarse vertex; frozen.
    Seed,
    /// Assigned to the aggregate seeded at the carried vertex; frozen.
    Decided(usize),
}

impl VertexStatus {
    /// Message precedence: `Seed > Undecided > Decided`.
    fn rank(self) -> u8 {
        match self {
            VertexStatus::Decided(_) => 0,
            VertexStatus::Undecided => 1,
            VertexStatus::Seed => 2,
        }
    }

    /// Index payload a vertex broadcasts: itself, or its seed once decided.
    fn payload(self, own: usize) -> usize {
        match self {
            VertexStatus::Decided(s) => s,
            _ => own,
        }
    }
}

/// Best incoming offer seen by a vertex during one round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AggMessage {
    rank: u8,
    index: usize,
    weight: f64,
}

/// The identity of the round reduction: loses to every real message.
/// (`usize::MAX` stands in for the out-of-band index, and the index
/// tie-break prefers smaller values, so nothing ever loses *to* it.)
const NULL_MESSAGE: AggMessage = AggMessage {
    rank: 0,
    index: usize::MAX,
    weight: 0.0,
};

struct AggSemiring;

impl Semiring for AggSemiring {
    type MatrixElem = f64;
    type Input = (u8, usize);
    type Output = AggMessage;

    fn combine(&self, e: &f64, x: &(u8, usize)) -> AggMessage {
        if *e != 0.0 {
            AggMessage {
                rank: x.0,
                index: x.1,
                weight: *e,
            }
        } else {
            NULL_MESSAGE
        }
    }

    fn reduce(&self, a: AggMessage, b: AggMessage) -> AggMessage {
        let ord = a
            .rank
            .cmp(&b.rank)
            .then(a.weight.total_cmp(&b.weight))
            .then(b.index.cmp(&a.index));
        if ord == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn identity(&self) -> AggMessage {
        NULL_MESSAGE
    }
}

/// Drops strength entries below `filter_factor`.
pub fn filter_strength(s: &SparseMatrix<f64>, filter_factor: f64) -> Result<SparseMatrix<f64>> {
    if !(filter_factor > 0.0 && filter_factor <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "filter factor must lie in (0, 1], got {filter_factor}"
        )));
    }
    let entries: Vec<(usize, usize, f64)> = s
        .entries()
        .filter(|&(_, _, v)| *v >= filter_factor)
        .map(|(i, j, v)| (i, j, *v))
        .collect();
    SparseMatrix::from_entries(s.nrows(), s.ncols(), entries)
}

/// One voting round over the filtered strength graph. Only undecided
/// vertices act: a seed message decides them, an undecided message casts a
/// vote for its sender (votes persist across rounds), and any vertex still
/// undecided after the pass with `votes >= threshold` becomes a seed.
pub fn aggregation_step(
    s_filt: &DistMatrix<f64>,
    status: &mut [VertexStatus],
    votes: &mut [u32],
    threshold: u32,
) -> Result<()> {
    let n = status.len();
    let input: Vec<(u8, usize)> = status
        .iter()
        .enumerate()
        .map(|(i, st)| (st.rank(), st.payload(i)))
        .collect();
    let d = spmv_semiring(s_filt, &input, &AggSemiring)?;

    // decisions read the pre-round status snapshot already baked into `d`
    for i in 0..n {
        if status[i] != VertexStatus::Undecided {
            continue;
        }
        match d[i].rank {
            2 => status[i] = VertexStatus::Decided(d[i].index),
            1 => votes[d[i].index] += 1,
            _ => {}
        }
    }
    for i in 0..n {
        if status[i] == VertexStatus::Undecided && votes[i] >= threshold {
            status[i] = VertexStatus::Seed;
        }
    }
    Ok(())
}

/// Final vertex-to-aggregate assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    /// Aggregate id of each vertex, in `0..m`.
    pub agg_of: Vec<usize>,
    /// Seed vertex of each aggregate, ascending.
    pub seed_of: Vec<usize>,
}

impl Assignment {
    pub fn num_aggregates(&self) -> usize {
        self.seed_of.len()
    }
}

/// Runs the voting rounds with a geometrically loosening strength filter
/// (`0.5^round`) and converts the final status vector to an assignment:
/// decided vertices join their seed, everything else becomes a singleton.
/// Aggregates are numbered by ascending seed index.
pub fn aggregate(
    s: &SparseMatrix<f64>,
    layout: &BlockLayout,
    rounds: usize,
    threshold: u32,
) -> Result<Assignment> {
    let n = s.nrows();
    let mut status = vec![VertexStatus::Undecided; n];
    let mut votes = vec![0u32; n];
    for round in 1..=rounds {
        let s_filt = filter_strength(s, 0.5f64.powi(round as i32))?;
        let dist = layout.partition(&s_filt)?;
        aggregation_step(&dist, &mut status, &mut votes, threshold)?;
    }

    let mut seed_ids = vec![usize::MAX; n];
    let mut seed_of = Vec::new();
    for (i, st) in status.iter().enumerate() {
        if !matches!(st, VertexStatus::Decided(_)) {
            seed_ids[i] = seed_of.len();
            seed_of.push(i);
        }
    }
    let agg_of = status
        .iter()
        .enumerate()
        .map(|(i, st)| match st {
            VertexStatus::Decided(s) => seed_ids[*s],
            _ => seed_ids[i],
        })
        .collect();
    Ok(Assignment { agg_of, seed_of })
}

/// Aggregate-membership restriction: `R[agg_of[j], j] = 1`, one entry per
/// column. The prolongation is its transpose.
pub fn build_restriction(a: &Assignment) -> SparseMatrix<f64> {
    let entries: Vec<(usize, usize, f64)> = a
        .agg_of
        .iter()
        .enumerate()
        .map(|(j, &agg)| (agg, j, 1.0))
        .collect();
    SparseMatrix::from_entries(a.num_aggregates(), a.agg_of.len(), entries)
        .expect("assignment indices are in range by construction")
}

/// Coarse operator `R L P`. The product of a Laplacian with a 0/1
/// aggregation pair is again a Laplacian; the diagonal is rewritten as the
/// negated off-diagonal row sum so row sums are exactly zero despite
/// floating-point dust in the triple product.
pub fn galerkin_coarse(
    r: &SparseMatrix<f64>,
    l: &LaplacianMatrix,
    p: &SparseMatrix<f64>,
) -> Result<LaplacianMatrix> {
    if r.ncols() != l.nrows() || p.nrows() != l.nrows() || r.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "galerkin product: R is {}x{}, L is {}x{}, P is {}x{}",
            r.nrows(),
            r.ncols(),
            l.nrows(),
            l.nrows(),
            p.nrows(),
            p.ncols()
        )));
    }
    let coarse = r.spgemm(l.matrix())?.spgemm(p)?;
    let m = coarse.nrows();
    let mut rowsum = vec![0.0f64; m];
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(coarse.nnz() + m);
    for (i, j, &v) in coarse.entries() {
        if i != j && v != 0.0 {
            entries.push((i, j, v));
            rowsum[i] += v;
        }
    }
    for (i, &s) in rowsum.iter().enumerate() {
        if s != 0.0 {
            entries.push((i, i, -s));
        }
    }
    LaplacianMatrix::new(SparseMatrix::from_entries(m, m, entries)?)
}
