//! Absorbing Markov chains: definition, validation, serialization and
//! the two composition operators (parallel and sequential connection).
//!
//! State `0` is the absorbing state. States `1..=n` are transient. The
//! initial distribution is stored for states `1..=n`; its deficit
//! `1 - sum(a)` is the probability `a_0` of starting absorbed, which
//! produces the empty word.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on every row sum of the transition matrix.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// A finite absorbing Markov chain with its initial distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    matrix: DMatrix<f64>,
    initial: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// On-disk JSON layout of a chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainFile {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ChainSpec {
    /// Builds a chain from the full `(n+1)x(n+1)` row-major matrix and the
    /// initial distribution over states `1..=n`. Only dimensions are checked
    /// here; use [`ChainSpec::validate`] for the probabilistic conditions.
    pub fn new(
        rows: Vec<Vec<f64>>,
        initial: Vec<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::Dimension("matrix has no rows".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != size) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {size}",
                row.len()
            )));
        }
        if initial.len() != size - 1 {
            return Err(Error::Dimension(format!(
                "initial distribution has {} entries, expected {}",
                initial.len(),
                size - 1
            )));
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::Dimension(format!(
                    "{} labels given, expected {size} (absorbing state included)",
                    l.len()
                )));
            }
        }
        let matrix = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        Ok(ChainSpec {
            matrix,
            initial,
            labels,
        })
    }

    pub(crate) fn from_parts(matrix: DMatrix<f64>, initial: Vec<f64>) -> Self {
        debug_assert_eq!(matrix.nrows(), initial.len() + 1);
        ChainSpec {
            matrix,
            initial,
            labels: None,
        }
    }

    /// Number of transient states.
    pub fn n(&self) -> usize {
        self.initial.len()
    }

    /// Full transition matrix including the absorbing row and column.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    #[inline]
    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.matrix[(from, to)]
    }

    /// Initial probability of `state`; for state 0 this is the deficit `a_0`,
    /// snapped to zero when it is below the row-sum tolerance.
    pub fn initial(&self, state: usize) -> f64 {
        if state == 0 {
            self.empty_word_probability()
        } else {
            self.initial[state - 1]
        }
    }

    pub fn initial_distribution(&self) -> &[f64] {
        &self.initial
    }

    pub fn empty_word_probability(&self) -> f64 {
        let deficit = 1.0 - self.initial.iter().sum::<f64>();
        if deficit.abs() <= ROW_SUM_TOLERANCE {
            0.0
        } else {
            deficit.max(0.0)
        }
    }

    /// Transient states with positive initial probability.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.n())
            .filter(|&i| self.initial[i - 1] > 0.0)
            .collect()
    }

    /// Positive-probability successors of `state`, in increasing order.
    pub fn successors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (0..=self.n()).filter(move |&j| self.matrix[(state, j)] > 0.0)
    }

    /// The substochastic block over transient states (indices shifted by one).
    pub fn transient_block(&self) -> DMatrix<f64> {
        let n = self.n();
        self.matrix.view((1, 1), (n, n)).into_owned()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() + 1 {
            return Err(Error::Dimension(format!(
                "{} labels given, expected {}",
                labels.len(),
                self.n() + 1
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same chain with a different initial distribution over states `1..=n`.
    pub fn with_initial(&self, initial: Vec<f64>) -> Result<Self> {
        if initial.len() != self.n() {
            return Err(Error::Dimension(format!(
                "initial distribution has {} entries, expected {}",
                initial.len(),
                self.n()
            )));
        }
        Ok(ChainSpec {
            initial,
            ..self.clone()
        })
    }

    pub fn label(&self, state: usize) -> String {
        match &self.labels {
            Some(l) => l[state].clone(),
            None => format!("E{state}"),
        }
    }

    /// Hyphen-joined labels of a state sequence.
    pub fn format_word(&self, states: &[usize]) -> String {
        states
            .iter()
            .map(|&s| self.label(s))
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Rescales every transient row to sum to one and the initial vector to
    /// sum to at most one. Never applied implicitly.
    pub fn renormalized(&self) -> Self {
        let mut out = self.clone();
        let size = self.n() + 1;
        for i in 1..size {
            let s: f64 = out.matrix.row(i).iter().sum();
            if s > 0.0 {
                for j in 0..size {
                    out.matrix[(i, j)] /= s;
                }
            }
        }
        for j in 0..size {
            out.matrix[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
        }
        let total: f64 = out.initial.iter().sum();
        if total > 1.0 {
            out.initial.iter_mut().for_each(|a| *a /= total);
        }
        out
    }

    /// States reachable from the support of the initial distribution
    /// (transient states only, sorted).
    pub fn reachable_states(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut stack = self.support();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for w in self.successors(v) {
                if w != 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (1..=n).filter(|&i| seen[i]).collect()
    }

    /// Checks the chain conditions and reports every violation.
    pub fn validate(&self) -> ValidationReport {
        validate_chain(self)
    }

    /// Returns an error carrying the report when the chain has hard violations.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidChain(report))
        }
    }

    pub fn to_file(&self) -> ChainFile {
        let size = self.n() + 1;
        ChainFile {
            n: self.n(),
            matrix: (0..size)
                .map(|i| (0..size).map(|j| self.matrix[(i, j)]).collect())
                .collect(),
            initial: self.initial.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_file(file: ChainFile) -> Result<Self> {
        if file.matrix.len() != file.n + 1 {
            return Err(Error::Dimension(format!(
                "field n = {} but matrix has {} rows",
                file.n,
                file.matrix.len()
            )));
        }
        ChainSpec::new(file.matrix, file.initial, file.labels)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("chain file serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// A single failed condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NegativeEntry {
        row: usize,
        col: usize,
        value: f64,
    },
    RowSum {
        row: usize,
        sum: f64,
    },
    AbsorbingRow,
    InitialEntry {
        state: usize,
        value: f64,
    },
    InitialSum {
        sum: f64,
    },
    /// Transient states from which the absorbing state cannot be reached.
    Recurrent {
        states: Vec<usize>,
    },
    /// States that are never visited from the initial support.
    Unreachable {
        states: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry { row, col, value } => {
                write!(f, "stochasticity: entry ({row},{col}) = {value} is not a probability")
            }
            Violation::RowSum { row, sum } => {
                write!(f, "stochasticity: row {row} sums to {sum}, expected 1")
            }
            Violation::AbsorbingRow => write!(f, "absorbing row: row 0 must be (1, 0, ..., 0)"),
            Violation::InitialEntry { state, value } => {
                write!(f, "initial distribution: a_{state} = {value} is not a probability")
            }
            Violation::InitialSum { sum } => {
                write!(f, "initial distribution: entries sum to {sum} > 1")
            }
            Violation::Recurrent { states } => write!(
                f,
                "recurrence: absorbing state unreachable from states {states:?}"
            ),
            Violation::Unreachable { states } => write!(
                f,
                "reachability (warning): states {states:?} are never visited from the initial support"
            ),
        }
    }
}

/// Outcome of [`validate_chain`]: hard violations plus warnings.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "ok")?;
        }
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn validate_chain(spec: &ChainSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let size = spec.n() + 1;
    let m = spec.matrix();

    for i in 0..size {
        for j in 0..size {
            let v = m[(i, j)];
            if !(0.0..=1.0).contains(&v) {
                report.violations.push(Violation::NegativeEntry {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    let absorbing_ok = m[(0, 0)] == 1.0 && (1..size).all(|j| m[(0, j)] == 0.0);
    if !absorbing_ok {
        report.violations.push(Violation::AbsorbingRow);
    }
    for i in 1..size {
        let sum: f64 = m.row(i).iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            report.violations.push(Violation::RowSum { row: i, sum });
        }
    }
    for (k, &a) in spec.initial_distribution().iter().enumerate() {
        if !(0.0..=1.0).contains(&a) {
            report.violations.push(Violation::InitialEntry {
                state: k + 1,
                value: a,
            });
        }
    }
    let total: f64 = spec.initial_distribution().iter().sum();
    if total > 1.0 + ROW_SUM_TOLERANCE {
        report.violations.push(Violation::InitialSum { sum: total });
    }

    // Reverse reachability to the absorbing state.
    let mut reaches = vec![false; size];
    reaches[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..size {
            if !reaches[i] && (0..size).any(|j| m[(i, j)] > 0.0 && reaches[j]) {
                reaches[i] = true;
                changed = true;
            }
        }
    }
    let recurrent: Vec<usize> = (1..size).filter(|&i| !reaches[i]).collect();
    if !recurrent.is_empty() {
        report
            .violations
            .push(Violation::Recurrent { states: recurrent });
    }

    let reachable = spec.reachable_states();
    let unreachable: Vec<usize> = (1..size)
        .filter(|s| reachable.binary_search(s).is_err())
        .collect();
    if !unreachable.is_empty() {
        report.warnings.push(Violation::Unreachable {
            states: unreachable,
        });
    }
    report
}

/// A trajectory ending at the absorbing state, with its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub states: Vec<usize>,
    pub prob: f64,
    /// Sum of the logs of the factors, accumulated left to right.
    pub log_prob: f64,
}

impl Word {
    /// Number of transient states in the word (absorbing state excluded).
    pub fn len(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.states.len() == 1
    }
}

/// Checks that `states` is a word of `spec` and computes its probability.
pub fn word(spec: &ChainSpec, states: &[usize]) -> Result<Word> {
    let n = spec.n();
    let Some((&last, body)) = states.split_last() else {
        return Err(Error::InvalidWord("empty state sequence".into()));
    };
    if last != 0 {
        return Err(Error::InvalidWord(format!(
            "last state is {} but words end at the absorbing state",
            spec.label(last)
        )));
    }
    if let Some(&s) = states.iter().find(|&&s| s > n) {
        return Err(Error::InvalidWord(format!(
            "state {s} out of range 0..={n}"
        )));
    }
    if body.is_empty() {
        let a0 = spec.empty_word_probability();
        return Ok(Word {
            states: vec![0],
            prob: a0,
            log_prob: a0.ln(),
        });
    }
    if let Some(pos) = body.iter().position(|&s| s == 0) {
        return Err(Error::InvalidWord(format!(
            "absorbing state at position {pos} before the end of the word"
        )));
    }
    let first = body[0];
    let a = spec.initial(first);
    if a <= 0.0 {
        return Err(Error::InvalidWord(format!(
            "initial state {} has zero probability",
            spec.label(first)
        )));
    }
    let mut prob = a;
    let mut log_prob = a.ln();
    for pair in states.windows(2) {
        let p = spec.prob(pair[0], pair[1]);
        if p <= 0.0 {
            return Err(Error::InvalidWord(format!(
                "transition {} -> {} has zero probability",
                spec.label(pair[0]),
                spec.label(pair[1])
            )));
        }
        prob *= p;
        log_prob += p.ln();
    }
    Ok(Word {
        states: states.to_vec(),
        prob,
        log_prob,
    })
}

/// `Pr(w) = a_{i1} p_{i1 i2} ... p_{i(m-1) im}`.
pub fn word_probability(spec: &ChainSpec, states: &[usize]) -> Result<f64> {
    word(spec, states).map(|w| w.prob)
}

/// The independent-letters ("monkey typing") chain: every transient row is
/// `(p_0, p_1, ..., p_n)` and the first letter is drawn from the letter
/// distribution conditioned on not being the space.
pub fn from_letter_probabilities(p: &[f64]) -> Result<ChainSpec> {
    let Some(&space) = p.first() else {
        return Err(Error::InvalidArgument(
            "no letter probabilities given".into(),
        ));
    };
    if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidArgument(
            "letter probabilities must lie in [0, 1]".into(),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "letter probabilities sum to {total}, expected 1"
        )));
    }
    if space <= 0.0 {
        return Err(Error::InvalidArgument(
            "space probability p_0 must be positive, otherwise absorption is impossible".into(),
        ));
    }
    let size = p.len();
    let matrix = DMatrix::from_fn(size, size, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) => 0.0,
        (_, j) => p[j],
    });
    let initial = if size == 1 {
        Vec::new()
    } else {
        p[1..].iter().map(|&x| x / (1.0 - space)).collect()
    };
    Ok(ChainSpec::from_parts(matrix, initial))
}

/// Disjoint union of chains sharing one absorbing state. The initial
/// distribution is the `weights`-mixture of the components'.
pub fn compose_parallel(specs: &[ChainSpec], weights: &[f64]) -> Result<ChainSpec> {
    if specs.len() < 2 {
        return Err(Error::InvalidArgument(
            "parallel composition needs at least two chains".into(),
        ));
    }
    if weights.len() != specs.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} chains",
            weights.len(),
            specs.len()
        )));
    }
    if weights.iter().any(|&w| w <= 0.0) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    for s in specs {
        s.ensure_valid()?;
    }

    let n: usize = specs.iter().map(ChainSpec::n).sum();
    let mut matrix = DMatrix::zeros(n + 1, n + 1);
    matrix[(0, 0)] = 1.0;
    let mut initial = Vec::with_capacity(n);
    let mut offset = 0;
    for (spec, &w) in specs.iter().zip(weights) {
        let k = spec.n();
        for i in 1..=k {
            matrix[(offset + i, 0)] = spec.prob(i, 0);
            for j in 1..=k {
                matrix[(offset + i, offset + j)] = spec.prob(i, j);
            }
            initial.push(w * spec.initial(i));
        }
        offset += k;
    }
    Ok(ChainSpec::from_parts(matrix, initial))
}

/// Redirects `fraction` of the absorption probability of state `from` of the
/// first chain into state `to` of the second chain (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Redirect {
    pub from: usize,
    pub to: usize,
    pub fraction: f64,
}

/// Sequential connection: some absorbing arcs of `first` are redirected into
/// `second`. States of `second` are numbered after those of `first`; the
/// initial distribution is that of `first`.
pub fn compose_sequential(
    first: &ChainSpec,
    second: &ChainSpec,
    redirects: &[Redirect],
) -> Result<ChainSpec> {
    first.ensure_valid()?;
    second.ensure_valid()?;
    if redirects.is_empty() {
        return Err(Error::InvalidArgument(
            "sequential composition needs at least one redirected arc".into(),
        ));
    }
    let (n1, n2) = (first.n(), second.n());
    let mut used = vec![0.0; n1 + 1];
    for r in redirects {
        if r.from == 0 || r.from > n1 || r.to == 0 || r.to > n2 {
            return Err(Error::InvalidArgument(format!(
                "redirect {} -> {} out of range",
                r.from, r.to
            )));
        }
        if !(r.fraction > 0.0 && r.fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "redirected fraction {} not in (0, 1]",
                r.fraction
            )));
        }
        if first.prob(r.from, 0) <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "state {} of the first chain has no arc to the absorbing state",
                r.from
            )));
        }
        used[r.from] += r.fraction;
    }
    if let Some(i) = (1..=n1).find(|&i| used[i] > 1.0 + ROW_SUM_TOLERANCE) {
        return Err(Error::InvalidArgument(format!(
            "redirected fractions of state {i} sum to {} > 1",
            used[i]
        )));
    }

    // Every vertex of the second chain must be reachable through an entry.
    let mut seen = vec![false; n2 + 1];
    let mut stack: Vec<usize> = redirects.iter().map(|r| r.to).collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for w in second.successors(v) {
            if w != 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let missed: Vec<usize> = (1..=n2).filter(|&i| !seen[i]).collect();
    if !missed.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "states {missed:?} of the second chain are not reachable through redirected arcs"
        )));
    }

    let n = n1 + n2;
    let mut matrix = DMatrix::zeros(n + 1, n + 1);
    matrix[(0, 0)] = 1.0;
    for i in 1..=n1 {
        for j in 1..=n1 {
            matrix[(i, j)] = first.prob(i, j);
        }
        matrix[(i, 0)] = first.prob(i, 0);
    }
    for r in redirects {
        let mass = first.prob(r.from, 0) * r.fraction;
        matrix[(r.from, n1 + r.to)] += mass;
    }
    for i in 1..=n1 {
        // Exact zero when the whole absorption mass was moved.
        let keep = 1.0 - used[i].min(1.0);
        matrix[(i, 0)] = if keep <= ROW_SUM_TOLERANCE {
            0.0
        } else {
            first.prob(i, 0) * keep
        };
    }
    for i in 1..=n2 {
        matrix[(n1 + i, 0)] = second.prob(i, 0);
        for j in 1..=n2 {
            matrix[(n1 + i, n1 + j)] = second.prob(i, j);
        }
    }
    let mut initial = first.initial_distribution().to_vec();
    initial.resize(n1 + n2, 0.0);
    Ok(ChainSpec::from_parts(matrix, initial))
}
