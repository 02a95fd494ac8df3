use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use super::EngineError;

/// Position of a decision variable in the global (fixed) order of a universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) u16);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A subset of the variables of one universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet(FixedBitSet);

impl VarSet {
    pub fn empty(num_vars: usize) -> VarSet {
        VarSet(FixedBitSet::with_capacity(num_vars))
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(num_vars: usize, vars: I) -> VarSet {
        let mut set = VarSet::empty(num_vars);
        for v in vars {
            set.insert(v);
        }
        set
    }

    /// Size of the universe this set is drawn from.
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, var: VarId) {
        self.0.insert(var.index());
    }

    pub fn remove(&mut self, var: VarId) {
        self.0.set(var.index(), false);
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.0.contains(var.index())
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Variables in ascending decision order.
    pub fn iter(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.ones().map(|i| VarId(i as u16))
    }

    pub fn to_vec(&self) -> Vec<VarId> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut result = self.0.clone();
        result.union_with(&other.0);
        VarSet(result)
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        let mut result = self.0.clone();
        result.difference_with(&other.0);
        VarSet(result)
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        let mut result = self.0.clone();
        result.intersect_with(&other.0);
        VarSet(result)
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

/// The decision variables available to an engine.
///
/// Order: `s1, s1', s2, s2', ..., sn, sn', c1, ..., cm`. Every state variable
/// is immediately followed by its primed twin, so renaming between the two
/// blocks never reorders a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableUniverse {
    state_names: Vec<String>,
    input_names: Vec<String>,
    names: Vec<String>,
}

impl VariableUniverse {
    pub fn new(state_names: Vec<String>, input_names: Vec<String>) -> Result<Self, EngineError> {
        let n = state_names.len();
        let total = 2 * n + input_names.len();
        if total >= u16::MAX as usize {
            return Err(EngineError::contract(format!(
                "universe with {total} variables exceeds the supported maximum"
            )));
        }
        let mut names = Vec::with_capacity(total);
        for s in &state_names {
            names.push(s.clone());
            names.push(format!("{s}'"));
        }
        names.extend(input_names.iter().cloned());
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(EngineError::contract(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(VariableUniverse { state_names, input_names, names })
    }

    /// Universe with anonymous names `s1..sn` and `c1..cm`.
    pub fn anonymous(num_states: usize, num_inputs: usize) -> Self {
        let states = (1..=num_states).map(|i| format!("s{i}")).collect();
        let inputs = (1..=num_inputs).map(|i| format!("c{i}")).collect();
        VariableUniverse::new(states, inputs).expect("anonymous names are distinct")
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn state_var(&self, i: usize) -> VarId {
        assert!(i < self.num_states(), "state variable {i} out of range");
        VarId((2 * i) as u16)
    }

    pub fn primed_var(&self, i: usize) -> VarId {
        assert!(i < self.num_states(), "state variable {i} out of range");
        VarId((2 * i + 1) as u16)
    }

    pub fn input_var(&self, j: usize) -> VarId {
        assert!(j < self.num_inputs(), "input variable {j} out of range");
        VarId((2 * self.num_states() + j) as u16)
    }

    pub fn state_vars(&self) -> Vec<VarId> {
        (0..self.num_states()).map(|i| self.state_var(i)).collect()
    }

    pub fn primed_vars(&self) -> Vec<VarId> {
        (0..self.num_states()).map(|i| self.primed_var(i)).collect()
    }

    pub fn input_vars(&self) -> Vec<VarId> {
        (0..self.num_inputs()).map(|j| self.input_var(j)).collect()
    }

    pub fn state_set(&self) -> VarSet {
        VarSet::from_vars(self.num_vars(), self.state_vars())
    }

    pub fn primed_set(&self) -> VarSet {
        VarSet::from_vars(self.num_vars(), self.primed_vars())
    }

    pub fn input_set(&self) -> VarSet {
        VarSet::from_vars(self.num_vars(), self.input_vars())
    }

    /// State and input variables (the domain of coloured vertex sets).
    pub fn vertex_colour_set(&self) -> VarSet {
        self.state_set().union(&self.input_set())
    }

    pub fn all_set(&self) -> VarSet {
        VarSet::from_vars(self.num_vars(), (0..self.num_vars()).map(|i| VarId(i as u16)))
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.names[var.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u16))
    }

    pub fn contains(&self, var: VarId) -> bool {
        var.index() < self.num_vars()
    }

    /// Index `i` such that `var` is `s_i` or `s_i'`.
    pub fn state_index(&self, var: VarId) -> Option<usize> {
        let i = var.index();
        (i < 2 * self.num_states()).then_some(i / 2)
    }

    pub fn is_primed(&self, var: VarId) -> bool {
        let i = var.index();
        i < 2 * self.num_states() && i % 2 == 1
    }

    pub fn input_index(&self, var: VarId) -> Option<usize> {
        let i = var.index();
        let base = 2 * self.num_states();
        (i >= base && i < self.num_vars()).then(|| i - base)
    }
}
