//! Picard-class bookkeeping for the two semiorthogonal decompositions of
//! the double cover `Y` of P^2 x P^2 and the mutations identifying their
//! exceptional parts.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// `a*H1 + b*H2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass {
    pub a: i64,
    pub b: i64,
}

impl PicClass {
    pub const fn new(a: i64, b: i64) -> Self {
        PicClass { a, b }
    }

    pub fn plus(self, o: PicClass) -> PicClass {
        PicClass::new(self.a + o.a, self.b + o.b)
    }

    pub fn swapped(self) -> PicClass {
        PicClass::new(self.b, self.a)
    }
}

/// Canonical class `-2H1 - 2H2` of the double cover.
pub const CANONICAL_Y: PicClass = PicClass::new(-2, -2);

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 && self.b == 0 {
            return f.write_str("O");
        }
        let mut s = String::new();
        for (c, h) in [(self.a, "H1"), (self.b, "H2")] {
            if c == 0 {
                continue;
            }
            if c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if c.abs() != 1 {
                s.push_str(&c.abs().to_string());
            }
            s.push_str(h);
        }
        write!(f, "O({})", s)
    }
}

/// A component of a decomposition: a line bundle, or an opaque
/// subcategory together with the line bundles it was left-mutated through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Line(PicClass),
    Marker {
        name: String,
        mutated_through: Vec<PicClass>,
    },
}

impl Component {
    pub fn marker(name: &str) -> Self {
        Component::Marker {
            name: name.to_string(),
            mutated_through: Vec::new(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Line(c) => write!(f, "{}", c),
            Component::Marker { name, mutated_through } => {
                for c in mutated_through.iter().rev() {
                    write!(f, "L_{} ", c)?;
                }
                f.write_str(name)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalList {
    pub items: Vec<Component>,
}

impl fmt::Display for ExceptionalList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str(">")
    }
}

impl ExceptionalList {
    pub fn new(items: Vec<Component>) -> Self {
        ExceptionalList { items }
    }

    pub fn lines(classes: &[PicClass]) -> Self {
        ExceptionalList::new(classes.iter().map(|&c| Component::Line(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn map_classes(&self, f: impl Fn(PicClass) -> PicClass) -> Self {
        let items = self
            .items
            .iter()
            .map(|c| match c {
                Component::Line(p) => Component::Line(f(*p)),
                Component::Marker { name, mutated_through } => Component::Marker {
                    name: name.clone(),
                    mutated_through: mutated_through.iter().map(|p| f(*p)).collect(),
                },
            })
            .collect();
        ExceptionalList { items }
    }
}

/// `<C_i, D(P^2) (x) O(H_j), D(P^2) (x) O(2H_j)>` with Beilinson's
/// collection on the first copy and its `O(H_i)` twist on the second;
/// `i = 1` or `2`.
pub fn fibration_decomposition(i: u8) -> Result<ExceptionalList> {
    let (hi, hj) = match i {
        1 => (PicClass::new(1, 0), PicClass::new(0, 1)),
        2 => (PicClass::new(0, 1), PicClass::new(1, 0)),
        _ => return Err(Error::invalid("fibration index must be 1 or 2")),
    };
    let times = |c: PicClass, k: i64| PicClass::new(c.a * k, c.b * k);
    let mut items = vec![Component::marker(&format!("C{}", i))];
    for k in 0..3 {
        items.push(Component::Line(times(hi, k).plus(hj)));
    }
    for k in 1..4 {
        items.push(Component::Line(times(hi, k).plus(times(hj, 2))));
    }
    Ok(ExceptionalList { items })
}

/// Moves the last component to the front, twisted by the canonical class.
pub fn serre_mutate_last_to_front(coll: &ExceptionalList, canonical: PicClass) -> Result<ExceptionalList> {
    let mut items = coll.items.clone();
    match items.pop() {
        Some(Component::Line(c)) => {
            items.insert(0, Component::Line(c.plus(canonical)));
            Ok(ExceptionalList { items })
        }
        Some(Component::Marker { .. }) => Err(Error::invalid("last component is not a line bundle")),
        None => Err(Error::invalid("empty decomposition")),
    }
}

/// Inverse of [`serre_mutate_last_to_front`].
pub fn serre_mutate_first_to_back(coll: &ExceptionalList, canonical: PicClass) -> Result<ExceptionalList> {
    let mut items = coll.items.clone();
    if items.is_empty() {
        return Err(Error::invalid("empty decomposition"));
    }
    match items.remove(0) {
        Component::Line(c) => {
            items.push(Component::Line(PicClass::new(c.a - canonical.a, c.b - canonical.b)));
            Ok(ExceptionalList { items })
        }
        Component::Marker { .. } => Err(Error::invalid("first component is not a line bundle")),
    }
}

/// `<.., O(c), M, ..>  ->  <.., L_{O(c)} M, O(c), ..>` for the marker at
/// position `pos + 1`.
pub fn left_mutate_marker(coll: &ExceptionalList, pos: usize) -> Result<ExceptionalList> {
    let mut items = coll.items.clone();
    if pos + 1 >= items.len() {
        return Err(Error::invalid("mutation position out of range"));
    }
    let line = match &items[pos] {
        Component::Line(c) => *c,
        _ => return Err(Error::invalid("can only mutate through a line bundle")),
    };
    match &mut items[pos + 1] {
        Component::Marker { mutated_through, .. } => mutated_through.push(line),
        _ => return Err(Error::invalid("no marker to mutate")),
    }
    items.swap(pos, pos + 1);
    Ok(ExceptionalList { items })
}

/// Line-bundle classes after the single front marker.
pub fn residual_orthogonal(coll: &ExceptionalList) -> Result<BTreeSet<PicClass>> {
    let markers = coll
        .items
        .iter()
        .filter(|c| matches!(c, Component::Marker { .. }))
        .count();
    match coll.items.first() {
        Some(Component::Marker { .. }) if markers == 1 => {}
        _ => return Err(Error::InvalidState("expected exactly one marker, in front".into())),
    }
    Ok(coll.items[1..]
        .iter()
        .filter_map(|c| match c {
            Component::Line(p) => Some(*p),
            _ => None,
        })
        .collect())
}

/// The decomposition after each mutation step.
#[derive(Clone, Debug)]
pub struct MutationTrace {
    pub steps: Vec<ExceptionalList>,
    pub residual: BTreeSet<PicClass>,
}

/// Serre mutation of the last bundle to the front, then the marker left
/// through it.
pub fn normalize(coll: &ExceptionalList, canonical: PicClass) -> Result<MutationTrace> {
    let s1 = serre_mutate_last_to_front(coll, canonical)?;
    let s2 = left_mutate_marker(&s1, 0)?;
    let residual = residual_orthogonal(&s2)?;
    Ok(MutationTrace {
        steps: vec![coll.clone(), s1, s2],
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub first: MutationTrace,
    pub second: MutationTrace,
    pub agree: bool,
}

pub fn check_identity(a: &ExceptionalList, b: &ExceptionalList, canonical: PicClass) -> Result<IdentityCheck> {
    let first = normalize(a, canonical)?;
    let second = normalize(b, canonical)?;
    let agree = first.residual == second.residual;
    Ok(IdentityCheck { first, second, agree })
}

/// Both mutated decompositions leave the same six line bundles
/// `H1, H2, H1+H2, 2H1+H2, H1+2H2, 2H1+2H2` behind.
pub fn verify_mutation_identity() -> bool {
    identity_check().map(|c| c.agree).unwrap_or(false)
}

pub fn identity_check() -> Result<IdentityCheck> {
    check_identity(&fibration_decomposition(1)?, &fibration_decomposition(2)?, CANONICAL_Y)
}

/// The six classes the two residual sets should equal.
pub fn expected_residual() -> BTreeSet<PicClass> {
    [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
        .into_iter()
        .map(|(a, b)| PicClass::new(a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serre_twist_of_last() {
        let d = fibration_decomposition(1).unwrap();
        let m = serre_mutate_last_to_front(&d, CANONICAL_Y).unwrap();
        assert_eq!(m.items[0], Component::Line(PicClass::new(1, 0)));
        assert_eq!(m.len(), d.len());
        let trivial = ExceptionalList::lines(&[PicClass::new(0, 0)]);
        assert_eq!(
            serre_mutate_last_to_front(&trivial, PicClass::new(0, 0)).unwrap(),
            trivial
        );
        assert!(serre_mutate_last_to_front(&ExceptionalList::new(vec![Component::marker("C")]), CANONICAL_Y).is_err());
    }

    #[test]
    fn twist_back_rotates() {
        let l = ExceptionalList::lines(&[PicClass::new(0, 0), PicClass::new(1, 0), PicClass::new(2, 1)]);
        let once = serre_mutate_last_to_front(&l, CANONICAL_Y).unwrap();
        assert_eq!(serre_mutate_first_to_back(&once, CANONICAL_Y).unwrap(), l);
        let mut full = l.clone();
        for _ in 0..l.len() {
            full = serre_mutate_last_to_front(&full, CANONICAL_Y).unwrap();
        }
        assert_eq!(full, l.map_classes(|c| c.plus(CANONICAL_Y)));
    }

    #[test]
    fn residuals() {
        let c = identity_check().unwrap();
        assert!(c.agree);
        assert_eq!(c.first.residual, expected_residual());
        assert_eq!(c.second.residual, expected_residual());
        assert_eq!(
            c.first.steps[2].to_string(),
            "<L_O(H1) C1, O(H1), O(H2), O(H1+H2), O(2H1+H2), O(H1+2H2), O(2H1+2H2)>"
        );
        let empty = ExceptionalList::new(vec![Component::marker("C")]);
        assert!(residual_orthogonal(&empty).unwrap().is_empty());
        let mut rotated = fibration_decomposition(1).unwrap();
        rotated.items.rotate_left(1);
        assert!(matches!(residual_orthogonal(&rotated), Err(Error::InvalidState(_))));
    }

    #[test]
    fn perturbed_and_swapped() {
        let a = fibration_decomposition(1).unwrap();
        let mut b = fibration_decomposition(2).unwrap();
        b.items[4] = Component::Line(PicClass::new(3, 1));
        assert!(!check_identity(&a, &b, CANONICAL_Y).unwrap().agree);
        let b = fibration_decomposition(2).unwrap();
        let sw = check_identity(
            &b.map_classes(PicClass::swapped),
            &a.map_classes(PicClass::swapped),
            CANONICAL_Y,
        )
        .unwrap();
        assert!(sw.agree);
    }

    #[test]
    fn display() {
        assert_eq!(PicClass::new(0, 0).to_string(), "O");
        assert_eq!(PicClass::new(-2, -2).to_string(), "O(-2H1-2H2)");
        assert_eq!(PicClass::new(1, 2).to_string(), "O(H1+2H2)");
    }
}
