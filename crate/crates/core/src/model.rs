//! Problem data for a single soft alldifferent constraint: decision
//! variables over interned values, the cost variable `z`, and the
//! decomposition-based violation measure.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense index of a value in an instance's value universe.
///
/// Ids are handed out in first-seen order while building an instance, so
/// comparing ids gives a deterministic tie-break everywhere downstream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueId(pub u32);

impl ValueId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ValueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no variables")]
    NoVariables,
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("z bounds are inverted: min {min} > max {max}")]
    InvertedZBounds { min: i64, max: i64 },
    #[error("z upper bound {0} is negative; no assignment can satisfy it")]
    NegativeZMax(i64),
    #[error("assignment has {got} entries, instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("value {value} is not in the domain of variable {var}")]
    ValueOutsideDomain { var: usize, value: ValueId },
}

/// Largest value the violation measure can take for `n` variables.
#[inline]
pub fn max_violation(n: usize) -> i64 {
    let n = n as i64;
    n * (n - 1) / 2
}

/// Number of equal pairs among `k` variables sharing one value.
#[inline]
pub(crate) fn pairs(k: usize) -> i64 {
    let k = k as i64;
    k * (k - 1) / 2
}

/// An immutable soft alldifferent instance.
///
/// Domains are sorted and deduplicated. The bounds of `z` are kept as an
/// interval clamped into `[0, n(n-1)/2]`: the set of `z` values with a
/// support is always an up-set, so nothing is lost by dropping holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    names: Vec<String>,
    domains: Vec<Vec<ValueId>>,
    value_tokens: Vec<String>,
    z_min: i64,
    z_max: i64,
    m: usize,
}

impl Instance {
    /// Builds an instance from `(name, tokens)` pairs and the bounds of `z`.
    ///
    /// Tokens are interned in first-seen order across all variables.
    pub fn build<N, T, I>(vars: I, z_bounds: (i64, i64)) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (N, Vec<T>)>,
        N: Into<String>,
        T: AsRef<str>,
    {
        let mut interner: HashMap<String, ValueId> = HashMap::new();
        let mut value_tokens = Vec::new();
        let mut names = Vec::new();
        let mut domains = Vec::new();

        for (name, tokens) in vars {
            let name = name.into();
            if tokens.is_empty() {
                return Err(InstanceError::EmptyDomain(name));
            }
            let mut domain: Vec<ValueId> = tokens
                .iter()
                .map(|tok| {
                    let tok = tok.as_ref();
                    *interner.entry(tok.to_owned()).or_insert_with(|| {
                        value_tokens.push(tok.to_owned());
                        ValueId((value_tokens.len() - 1) as u32)
                    })
                })
                .collect();
            domain.sort_unstable();
            domain.dedup();
            names.push(name);
            domains.push(domain);
        }

        if names.is_empty() {
            return Err(InstanceError::NoVariables);
        }
        let (z_min, z_max) = z_bounds;
        if z_min > z_max {
            return Err(InstanceError::InvertedZBounds {
                min: z_min,
                max: z_max,
            });
        }
        if z_max < 0 {
            return Err(InstanceError::NegativeZMax(z_max));
        }
        Ok(Self::assemble(names, domains, value_tokens, z_bounds))
    }

    fn assemble(
        names: Vec<String>,
        domains: Vec<Vec<ValueId>>,
        value_tokens: Vec<String>,
        (z_min, z_max): (i64, i64),
    ) -> Self {
        let top = max_violation(domains.len());
        let m = domains.iter().map(Vec::len).sum();
        Instance {
            names,
            domains,
            value_tokens,
            z_min: z_min.clamp(0, top),
            z_max: z_max.clamp(0, top),
            m,
        }
    }

    /// Derived copy with replaced domains and `z` bounds over the same value
    /// universe. Domains may be empty here; such an instance is simply
    /// inconsistent.
    pub fn derive(&self, domains: Vec<Vec<ValueId>>, z_bounds: (i64, i64)) -> Self {
        assert_eq!(
            domains.len(),
            self.n(),
            "derived instance must keep every variable"
        );
        let domains = domains
            .into_iter()
            .map(|mut d| {
                debug_assert!(d.iter().all(|v| v.index() < self.value_tokens.len()));
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect();
        Self::assemble(
            self.names.clone(),
            domains,
            self.value_tokens.clone(),
            z_bounds,
        )
    }

    /// Copy with variable `var` fixed to `value`.
    pub fn fix(&self, var: usize, value: ValueId) -> Self {
        let mut domains = self.domains.clone();
        domains[var] = vec![value];
        self.derive(domains, (self.z_min, self.z_max))
    }

    /// Copy with new bounds for `z`.
    pub fn with_z_bounds(&self, z_min: i64, z_max: i64) -> Self {
        self.derive(self.domains.clone(), (z_min, z_max))
    }

    pub fn n(&self) -> usize {
        self.domains.len()
    }

    /// Sum of domain sizes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn universe_size(&self) -> usize {
        self.value_tokens.len()
    }

    pub fn domain(&self, var: usize) -> &[ValueId] {
        &self.domains[var]
    }

    pub fn domains(&self) -> &[Vec<ValueId>] {
        &self.domains
    }

    pub fn contains(&self, var: usize, value: ValueId) -> bool {
        self.domains[var].binary_search(&value).is_ok()
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn token(&self, value: ValueId) -> &str {
        &self.value_tokens[value.index()]
    }

    pub fn value_tokens(&self) -> &[String] {
        &self.value_tokens
    }

    /// Looks up the id of an external value token.
    pub fn value_id(&self, token: &str) -> Option<ValueId> {
        self.value_tokens
            .iter()
            .position(|t| t == token)
            .map(|i| ValueId(i as u32))
    }

    pub fn z_min(&self) -> i64 {
        self.z_min
    }

    pub fn z_max(&self) -> i64 {
        self.z_max
    }

    pub fn has_empty_domain(&self) -> bool {
        self.domains.iter().any(Vec::is_empty)
    }

    /// Number of complete assignments (product of domain sizes), saturating.
    pub fn search_space(&self) -> u128 {
        self.domains
            .iter()
            .try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
            .unwrap_or(u128::MAX)
    }
}

/// One value per variable, each drawn from its domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<ValueId>);

impl Assignment {
    pub fn new(instance: &Instance, values: Vec<ValueId>) -> Result<Self, InstanceError> {
        if values.len() != instance.n() {
            return Err(InstanceError::AssignmentLength {
                expected: instance.n(),
                got: values.len(),
            });
        }
        for (var, &value) in values.iter().enumerate() {
            if !instance.contains(var, value) {
                return Err(InstanceError::ValueOutsideDomain { var, value });
            }
        }
        Ok(Assignment(values))
    }

    pub fn values(&self) -> &[ValueId] {
        &self.0
    }

    pub fn get(&self, var: usize) -> ValueId {
        self.0[var]
    }
}

/// Number of pairs `i < j` with equal values.
pub fn violation(instance: &Instance, assignment: &Assignment) -> i64 {
    let mut counts = vec![0usize; instance.universe_size()];
    for v in assignment.values() {
        counts[v.index()] += 1;
    }
    counts.into_iter().map(pairs).sum()
}
