//! The group-spec mini-language.
//!
//! ```text
//! spec    := term ( "x" term )*
//! term    := family "(" int ("," int | "," ident)* ")" | "perm:" cycles ("," cycles)*
//! cycles  := ( "(" int+ ")" )+
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gflin::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown group family {name:?} at byte {offset}")]
    UnknownFamily { name: String, offset: usize },
    #[error("parameter out of range for {family}: {message}")]
    Range { family: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraspecialVariant {
    /// Odd `p`, exponent `p`.
    ExpP,
    /// Odd `p`, exponent `p²`.
    ExpP2,
    /// `p = 2`, central power of `D8`.
    Plus,
    /// `p = 2`, `Q8` centrally joined with copies of `D8`.
    Minus,
}

impl ExtraspecialVariant {
    fn ident(self) -> &'static str {
        match self {
            ExtraspecialVariant::ExpP => "expP",
            ExtraspecialVariant::ExpP2 => "expP2",
            ExtraspecialVariant::Plus => "plus",
            ExtraspecialVariant::Minus => "minus",
        }
    }

    fn from_ident(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "expp" => Some(ExtraspecialVariant::ExpP),
            "expp2" => Some(ExtraspecialVariant::ExpP2),
            "plus" => Some(ExtraspecialVariant::Plus),
            "minus" => Some(ExtraspecialVariant::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(u64),
    Abelian(Vec<u64>),
    /// Order `2n`, acting on `n` points.
    Dihedral(u64),
    /// Dicyclic group of order `4n`; `Quaternion(2)` is `Q8`.
    Quaternion(u64),
    /// Order `2^k`.
    Semidihedral(u32),
    /// Order `p^(1+2n)`.
    Extraspecial {
        p: u64,
        n: u32,
        variant: ExtraspecialVariant,
    },
    Heisenberg(u64),
    Symmetric(u32),
    Alternating(u32),
    /// Generators, each a list of cycles over 1-based points.
    Perm(Vec<Vec<Vec<u32>>>),
    Product(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    /// The group order when it follows from the parameters alone.
    pub fn order_hint(&self) -> Option<u128> {
        let pow = |b: u64, e: u32| (b as u128).checked_pow(e).unwrap_or(u128::MAX);
        Some(match self {
            GroupKind::Cyclic(n) => *n as u128,
            GroupKind::Abelian(ns) => ns
                .iter()
                .fold(1u128, |a, n| a.saturating_mul(*n as u128)),
            GroupKind::Dihedral(n) => 2 * *n as u128,
            GroupKind::Quaternion(n) => 4 * *n as u128,
            GroupKind::Semidihedral(k) => pow(2, *k),
            GroupKind::Extraspecial { p, n, .. } => pow(*p, 1 + 2 * n),
            GroupKind::Heisenberg(p) => pow(*p, 3),
            GroupKind::Symmetric(n) => factorial(*n),
            GroupKind::Alternating(n) => (factorial(*n) / 2).max(1),
            GroupKind::Perm(_) => return None,
            GroupKind::Product(a, b) => a.order_hint()?.saturating_mul(b.order_hint()?),
        })
    }
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).fold(1u128, |a, k| a.saturating_mul(k))
}

/// A parsed group description.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub source_text: String,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for GroupSpec {}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Self {
        let source_text = render(&kind);
        GroupSpec { kind, source_text }
    }

    /// The parsed-and-re-rendered text; used as a cache key.
    pub fn canonical(&self) -> String {
        render(&self.kind)
    }

    pub fn product(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::new(GroupKind::Product(Box::new(left.kind), Box::new(right.kind)))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.kind))
    }
}

impl FromStr for GroupSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_spec(s)
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn render(kind: &GroupKind) -> String {
    match kind {
        GroupKind::Cyclic(n) => format!("cyclic({n})"),
        GroupKind::Abelian(ns) => format!("abelian({})", join(ns)),
        GroupKind::Dihedral(n) => format!("dihedral({n})"),
        GroupKind::Quaternion(n) => format!("quaternion({n})"),
        GroupKind::Semidihedral(k) => format!("semidihedral({k})"),
        GroupKind::Extraspecial { p, n, variant } => {
            format!("extraspecial({p},{n},{})", variant.ident())
        }
        GroupKind::Heisenberg(p) => format!("heisenberg({p})"),
        GroupKind::Symmetric(n) => format!("symmetric({n})"),
        GroupKind::Alternating(n) => format!("alternating({n})"),
        GroupKind::Perm(gens) => {
            let gens: Vec<String> = gens
                .iter()
                .map(|cycles| {
                    cycles
                        .iter()
                        .map(|c| {
                            let pts: Vec<String> = c.iter().map(u32::to_string).collect();
                            format!("({})", pts.join(" "))
                        })
                        .collect::<String>()
                })
                .collect();
            format!("perm: {}", gens.join(", "))
        }
        GroupKind::Product(a, b) => format!("{} x {}", render(a), render(b)),
    }
}

/// Parses a group spec. Products associate to the left.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, SpecError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty group spec"));
    }
    let mut kind = p.term()?;
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        match p.peek() {
            Some('x' | 'X' | '×') => {
                p.bump();
                let rhs = p.term()?;
                kind = GroupKind::Product(Box::new(kind), Box::new(rhs));
            }
            _ => return Err(p.syntax("expected 'x' or end of input")),
        }
    }
    Ok(GroupSpec {
        kind,
        source_text: text.to_string(),
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

enum Arg {
    Int(u64),
    Ident(String),
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> SpecError {
        SpecError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&format!("expected {c:?}")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Some(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<Option<u64>, SpecError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Ok(None);
        }
        self.src[start..self.pos]
            .parse()
            .map(Some)
            .map_err(|_| SpecError::Syntax {
                offset: start,
                message: "integer too large".into(),
            })
    }

    fn term(&mut self) -> Result<GroupKind, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let name = self
            .ident()
            .ok_or_else(|| self.syntax("expected a group family"))?
            .to_ascii_lowercase();
        if name == "perm" {
            self.expect(':')?;
            return self.perm_gens();
        }
        const FAMILIES: [&str; 9] = [
            "cyclic",
            "abelian",
            "dihedral",
            "quaternion",
            "semidihedral",
            "extraspecial",
            "heisenberg",
            "symmetric",
            "alternating",
        ];
        if !FAMILIES.contains(&name.as_str()) {
            return Err(SpecError::UnknownFamily { name, offset: start });
        }
        self.expect('(')?;
        let mut args = Vec::new();
        match self.int()? {
            Some(n) => args.push(Arg::Int(n)),
            None => return Err(self.syntax("expected an integer parameter")),
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                    if let Some(n) = self.int()? {
                        args.push(Arg::Int(n));
                    } else if let Some(id) = self.ident() {
                        args.push(Arg::Ident(id));
                    } else {
                        return Err(self.syntax("expected an integer or identifier"));
                    }
                }
                Some(')') => {
                    self.bump();
                    break;
                }
                _ => return Err(self.syntax("expected ',' or ')'")),
            }
        }
        family(&name, args)
    }

    fn perm_gens(&mut self) -> Result<GroupKind, SpecError> {
        let mut gens = vec![self.cycles()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
                gens.push(self.cycles()?);
            } else {
                break;
            }
        }
        Ok(GroupKind::Perm(gens))
    }

    fn cycles(&mut self) -> Result<Vec<Vec<u32>>, SpecError> {
        let mut cycles = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() != Some('(') {
                break;
            }
            let open = self.pos;
            self.bump();
            let mut pts: Vec<u32> = Vec::new();
            while let Some(n) = self.int()? {
                if n == 0 || n > u32::MAX as u64 {
                    return Err(SpecError::Syntax {
                        offset: open,
                        message: "cycle points are 1-based".into(),
                    });
                }
                if pts.contains(&(n as u32)) {
                    return Err(SpecError::Syntax {
                        offset: open,
                        message: format!("point {n} repeated in a cycle"),
                    });
                }
                pts.push(n as u32);
            }
            if pts.is_empty() {
                return Err(self.syntax("empty cycle"));
            }
            self.expect(')')?;
            cycles.push(pts);
        }
        if cycles.is_empty() {
            return Err(self.syntax("expected a cycle"));
        }
        Ok(cycles)
    }
}

fn family(name: &str, args: Vec<Arg>) -> Result<GroupKind, SpecError> {
    let range = |message: String| SpecError::Range {
        family: name.to_string(),
        message,
    };
    let ints = |args: &[Arg]| -> Result<Vec<u64>, SpecError> {
        args.iter()
            .map(|a| match a {
                Arg::Int(n) => Ok(*n),
                Arg::Ident(id) => Err(range(format!("unexpected identifier {id:?}"))),
            })
            .collect()
    };
    let single = |args: &[Arg], min: u64| -> Result<u64, SpecError> {
        let v = ints(args)?;
        if v.len() != 1 {
            return Err(range(format!("expected 1 parameter, got {}", v.len())));
        }
        if v[0] < min {
            return Err(range(format!("parameter must be at least {min}")));
        }
        Ok(v[0])
    };
    let small = |n: u64, max: u64| -> Result<u32, SpecError> {
        if n > max {
            Err(range(format!("parameter must be at most {max}")))
        } else {
            Ok(n as u32)
        }
    };
    Ok(match name {
        "cyclic" => GroupKind::Cyclic(single(&args, 1)?),
        "abelian" => {
            let v = ints(&args)?;
            if v.contains(&0) {
                return Err(range("factors must be positive".into()));
            }
            GroupKind::Abelian(v)
        }
        "dihedral" => GroupKind::Dihedral(single(&args, 3)?),
        "quaternion" => GroupKind::Quaternion(single(&args, 2)?),
        "semidihedral" => GroupKind::Semidihedral(small(single(&args, 4)?, 64)?),
        "heisenberg" => {
            let p = single(&args, 2)?;
            if !is_prime(p) {
                return Err(range(format!("{p} is not prime")));
            }
            GroupKind::Heisenberg(p)
        }
        "symmetric" => GroupKind::Symmetric(small(single(&args, 1)?, 64)?),
        "alternating" => GroupKind::Alternating(small(single(&args, 1)?, 64)?),
        "extraspecial" => {
            let [Arg::Int(p), Arg::Int(n), Arg::Ident(v)] = args.as_slice() else {
                return Err(range("expected (p, n, variant)".into()));
            };
            if !is_prime(*p) {
                return Err(range(format!("{p} is not prime")));
            }
            if *n < 1 {
                return Err(range("n must be at least 1".into()));
            }
            let variant = ExtraspecialVariant::from_ident(v)
                .ok_or_else(|| range(format!("unknown variant {v:?}")))?;
            let two_only = matches!(variant, ExtraspecialVariant::Plus | ExtraspecialVariant::Minus);
            if two_only != (*p == 2) {
                return Err(range(format!(
                    "variant {} is not available for p = {p}",
                    variant.ident()
                )));
            }
            GroupKind::Extraspecial {
                p: *p,
                n: small(*n, 16)?,
                variant,
            }
        }
        _ => unreachable!("family list checked by caller"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_family() {
        assert_eq!(parse_group_spec("cyclic(4)").unwrap().kind, GroupKind::Cyclic(4));
        assert_eq!(parse_group_spec("  Cyclic ( 4 ) ").unwrap().kind, GroupKind::Cyclic(4));
    }

    #[test]
    fn product_composition() {
        let s = parse_group_spec("extraspecial(3,1,expP) x cyclic(2)").unwrap();
        assert_eq!(
            s.kind,
            GroupKind::Product(
                Box::new(GroupKind::Extraspecial {
                    p: 3,
                    n: 1,
                    variant: ExtraspecialVariant::ExpP
                }),
                Box::new(GroupKind::Cyclic(2))
            )
        );
        let s = parse_group_spec("cyclic(2)xcyclic(3)xcyclic(5)").unwrap();
        let GroupKind::Product(left, right) = s.kind else { panic!() };
        assert_eq!(*right, GroupKind::Cyclic(5));
        assert!(matches!(*left, GroupKind::Product(..)));
    }

    #[test]
    fn cycle_notation() {
        let s = parse_group_spec("perm: (1 2 3)(4 5), (1 2)").unwrap();
        assert_eq!(
            s.kind,
            GroupKind::Perm(vec![vec![vec![1, 2, 3], vec![4, 5]], vec![vec![1, 2]]])
        );
        assert_eq!(s.canonical(), "perm: (1 2 3)(4 5), (1 2)");
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_group_spec("cyclic(4").unwrap_err() {
            SpecError::Syntax { offset, .. } => assert_eq!(offset, 8),
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            parse_group_spec("foo(3)").unwrap_err(),
            SpecError::UnknownFamily { offset: 0, .. }
        ));
        assert!(matches!(
            parse_group_spec("extraspecial(4,1,expP)").unwrap_err(),
            SpecError::Range { .. }
        ));
        assert!(matches!(
            parse_group_spec("extraspecial(3,1,plus)").unwrap_err(),
            SpecError::Range { .. }
        ));
        assert!(matches!(
            parse_group_spec("semidihedral(3)").unwrap_err(),
            SpecError::Range { .. }
        ));
        assert!(parse_group_spec("").is_err());
        assert!(parse_group_spec("cyclic(2) cyclic(3)").is_err());
        assert!(parse_group_spec("perm: (1 1)").is_err());
        assert!(parse_group_spec("perm: ()").is_err());
        assert!(parse_group_spec("cyclic(99999999999999999999999)").is_err());
    }

    #[test]
    fn order_hints() {
        let s = parse_group_spec("dihedral(999999)").unwrap();
        assert_eq!(s.kind.order_hint(), Some(1_999_998));
        let s = parse_group_spec("symmetric(4) x extraspecial(2,2,minus)").unwrap();
        assert_eq!(s.kind.order_hint(), Some(24 * 32));
        assert_eq!(parse_group_spec("perm: (1 2)").unwrap().kind.order_hint(), None);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    fn family() -> impl Strategy<Value = GroupKind> {
        prop_oneof![
            (1u64..50).prop_map(GroupKind::Cyclic),
            prop::collection::vec(1u64..9, 1..4).prop_map(GroupKind::Abelian),
            (3u64..30).prop_map(GroupKind::Dihedral),
            (2u64..12).prop_map(GroupKind::Quaternion),
            (1u32..7).prop_map(GroupKind::Symmetric),
            (4u32..7).prop_map(GroupKind::Semidihedral),
            prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(GroupKind::Heisenberg),
        ]
    }

    /// Left-nested products, the only shape the parser produces.
    fn spec() -> impl Strategy<Value = GroupKind> {
        prop::collection::vec(family(), 1..4).prop_map(|parts| {
            let mut it = parts.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, k| GroupKind::Product(Box::new(acc), Box::new(k)))
        })
    }

    proptest! {
        #[test]
        fn canonical_round_trip(kind in spec()) {
            let s = GroupSpec::new(kind.clone());
            let text = s.canonical();
            let back = parse_group_spec(&text).unwrap();
            prop_assert_eq!(&back.kind, &kind);
            prop_assert_eq!(back.canonical(), text);
        }

        #[test]
        fn perm_round_trip(cycles in prop::collection::vec(prop::collection::btree_set(1u32..8, 2..5), 1..4)) {
            let gens: Vec<Vec<Vec<u32>>> = cycles.iter().map(|c| vec![c.iter().copied().collect()]).collect();
            let kind = GroupKind::Perm(gens);
            let text = GroupSpec::new(kind.clone()).canonical();
            prop_assert_eq!(parse_group_spec(&text).unwrap().kind, kind);
        }
    }
}
