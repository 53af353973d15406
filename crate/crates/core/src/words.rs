//! Sturmian words: mechanical words with exact arithmetic, R/L induction from
//! continued fractions, factor complexity and Rauzy graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("denominator {den} too small for {len} letters (need > {need})")]
    PrecisionInsufficient { den: i128, len: usize, need: usize },
    #[error("prefix of length {len} too short to assert level {n} (need {need})")]
    PrefixTooShort { len: usize, n: usize, need: usize },
    #[error("{0}")]
    BadNumber(String),
}

/// (a + b sqrt(d)) / c with c != 0. Rationals have b = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    pub a: i128,
    pub b: i128,
    pub d: i128,
    pub c: i128,
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Sign of t - b sqrt(d).
fn cmp_with_root(t: i128, b: i128, d: i128) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let (ts, bs) = (t.signum(), if d == 0 { 0 } else { b.signum() });
    if ts != bs {
        return ts.cmp(&bs);
    }
    if ts == 0 {
        return Equal;
    }
    let (l, r) = (t * t, b * b * d);
    if ts > 0 {
        l.cmp(&r)
    } else {
        r.cmp(&l)
    }
}

impl Surd {
    pub fn rational(p: i128, q: i128) -> Surd {
        Surd { a: p, b: 0, d: 0, c: q }.normalized()
    }

    fn normalized(self) -> Surd {
        if self.c < 0 {
            Surd { a: -self.a, b: -self.b, d: self.d, c: -self.c }
        } else {
            self
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0 || self.d == 0 || isqrt(self.d).pow(2) == self.d
    }

    pub fn approx(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }

    /// Exact floor.
    pub fn floor(&self) -> i128 {
        let s = self.normalized();
        // largest m with m c - a <= b sqrt(d)
        let mut m = s.approx().floor() as i128;
        while cmp_with_root(m * s.c - s.a, s.b, s.d) == std::cmp::Ordering::Greater {
            m -= 1;
        }
        while cmp_with_root((m + 1) * s.c - s.a, s.b, s.d) != std::cmp::Ordering::Greater {
            m += 1;
        }
        m
    }

    pub fn ceil(&self) -> i128 {
        -Surd { a: -self.a, b: -self.b, ..*self }.floor()
    }

    /// n * self + other; both must share the radicand if irrational.
    fn affine(&self, n: i128, other: &Surd) -> Surd {
        let d = if self.b != 0 { self.d } else { other.d };
        Surd { a: n * self.a * other.c + other.a * self.c, b: n * self.b * other.c + other.b * self.c, d, c: self.c * other.c }
    }

    /// Partial quotients a_1, a_2, ... of x = [a_0; a_1, a_2, ...].
    pub fn continued_fraction(&self, count: usize) -> Vec<u32> {
        let s = self.normalized();
        let mut out = Vec::new();
        if s.is_rational() {
            let r = if s.b == 0 || s.d == 0 { 0 } else { isqrt(s.d) };
            let (mut p, mut q) = (s.a + s.b * r, s.c);
            let mut first = true;
            while q != 0 && out.len() < count {
                let a = p.div_euclid(q);
                if !first {
                    out.push(a as u32);
                }
                first = false;
                (p, q) = (q, p - a * q);
            }
            return out;
        }
        // x = (p + sqrt(n)) / q with q | n - p^2
        let (a, b, c) = if s.b > 0 { (s.a, s.b, s.c) } else { (-s.a, -s.b, -s.c) };
        let (mut p, n, mut q) = (a * c.abs(), b * b * s.d * c * c, c * c.abs());
        for k in 0..=count {
            let x = Surd { a: p, b: 1, d: n, c: q };
            let ak = x.floor();
            if k > 0 {
                out.push(ak as u32);
            }
            p = ak * q - p;
            q = (n - p * p) / q;
        }
        out
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}/{}", self.a, self.c)
        } else {
            write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
        }
    }
}

/// Parses "p/q", "p", "(p-sqrt(D))/r", "(p+q*sqrt(D))/r", "sqrt(D)-p".
pub fn parse_number(text: &str) -> Result<Surd, WordError> {
    let bad = || WordError::BadNumber(format!("cannot read '{text}' as p/q or (p + q*sqrt(D))/r"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match t.rfind('/') {
        Some(k) if !t[k + 1..].contains(')') => (&t[..k], t[k + 1..].parse::<i128>().map_err(|_| bad())?),
        _ => (&t[..], 1),
    };
    if den == 0 {
        return Err(bad());
    }
    let num = num.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(num);
    let Some(k) = num.find("sqrt(") else {
        return Ok(Surd::rational(num.parse().map_err(|_| bad())?, den));
    };
    let close = num[k..].find(')').ok_or_else(bad)? + k;
    let d: i128 = num[k + 5..close].parse().map_err(|_| bad())?;
    // coefficient in front of sqrt, with its sign
    let head = &num[..k];
    let (rest_before, coef) = match head.strip_suffix('*') {
        Some(h) => {
            let split = h.rfind(['+', '-']).unwrap_or(0);
            let c: i128 = h[split..].trim_start_matches('+').parse().map_err(|_| bad())?;
            (&h[..split], c)
        }
        None => match head.strip_suffix('-') {
            Some(h) => (h, -1),
            None => (head.strip_suffix('+').unwrap_or(head), 1),
        },
    };
    let tail = &num[close + 1..];
    let mut a = 0i128;
    for part in [rest_before, tail] {
        if !part.is_empty() {
            a += part.trim_start_matches('+').parse::<i128>().map_err(|_| bad())?;
        }
    }
    if d < 0 {
        return Err(bad());
    }
    Ok(Surd { a, b: coef, d, c: den }.normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    #[default]
    Floor,
    Ceil,
}

/// s_n = round((n+1) theta + rho) - round(n theta + rho) for n = 0 .. len-1.
pub fn mechanical_word(theta: &Surd, rho: &Surd, len: usize, mode: Rounding) -> Result<Vec<u8>, WordError> {
    if theta.floor() != 0 || theta.a == 0 && theta.b == 0 || rho.floor() != 0 {
        return Err(WordError::BadNumber("need 0 < theta < 1 and 0 <= rho < 1".into()));
    }
    if theta.is_rational() && rho.is_rational() {
        let den = theta.c.max(rho.c);
        let need = len * len;
        if den <= need as i128 {
            return Err(WordError::PrecisionInsufficient { den, len, need });
        }
    }
    if theta.b != 0 && rho.b != 0 && theta.d != rho.d {
        return Err(WordError::BadNumber("theta and rho use different radicands".into()));
    }
    let round = |n: usize| {
        let x = theta.affine(n as i128, rho);
        match mode {
            Rounding::Floor => x.floor(),
            Rounding::Ceil => x.ceil(),
        }
    };
    let mut prev = round(0);
    let mut w = Vec::with_capacity(len);
    for n in 0..len {
        let next = round(n + 1);
        w.push((next - prev) as u8);
        prev = next;
    }
    Ok(w)
}

pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&x| char::from(b'0' + x)).collect()
}

fn apply_r(u: &[u8], v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    (u.to_vec(), [u, v].concat())
}

fn apply_l(u: &[u8], v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    ([v, u].concat(), v.to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induction {
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    /// (u, v) after every single R or L.
    pub history: Vec<(Vec<u8>, Vec<u8>)>,
}

impl Induction {
    /// Longest common prefix of u and v.
    pub fn prefix(&self) -> Vec<u8> {
        self.u.iter().zip(&self.v).take_while(|(x, y)| x == y).map(|(x, _)| *x).collect()
    }
}

/// Starting from (0, 1), applies R^{a_1 - 1}, L^{a_2}, R^{a_3}, ... for the
/// first `steps` partial quotients.
pub fn cf_induction(quotients: &[u32], steps: usize) -> Induction {
    let (mut u, mut v) = (vec![0u8], vec![1u8]);
    let mut history = Vec::new();
    for (k, &a) in quotients.iter().take(steps).enumerate() {
        let reps = if k == 0 { a.saturating_sub(1) } else { a };
        for _ in 0..reps {
            (u, v) = if k % 2 == 0 { apply_r(&u, &v) } else { apply_l(&u, &v) };
            history.push((u.clone(), v.clone()));
        }
    }
    Induction { u, v, history }
}

/// Smallest prefix length at which level-n factor data is asserted.
pub fn required_length(n: usize) -> usize {
    10 * n + 100
}

pub fn factors(w: &[u8], n: usize) -> BTreeSet<&[u8]> {
    if n > w.len() {
        return BTreeSet::new();
    }
    w.windows(n.max(1)).map(|x| &x[..n]).chain(std::iter::once(&w[..n])).collect()
}

pub fn word_complexity(w: &[u8], n: usize) -> usize {
    factors(w, n).len()
}

/// Complexity to be used as a statement about the infinite word.
pub fn asserted_complexity(w: &[u8], n: usize) -> Result<usize, WordError> {
    check_length(w, n)?;
    Ok(word_complexity(w, n))
}

fn check_length(w: &[u8], n: usize) -> Result<(), WordError> {
    let need = required_length(n);
    if w.len() < need {
        Err(WordError::PrefixTooShort { len: w.len(), n, need })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RauzyCase {
    /// The two cycles meet in one vertex.
    SharedVertex,
    /// The two cycles share a segment of at least one edge.
    SharedSegment,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoCycles {
    pub case: RauzyCase,
    pub cycles: [Vec<usize>; 2],
    pub shared: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RauzyGraph {
    pub n: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    /// None when the graph is not two cycles glued along a vertex or path.
    pub shape: Option<TwoCycles>,
}

impl RauzyGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph R {\n");
        if let Some(sh) = &self.shape {
            s.push_str(&format!("  label=\"n={} {:?}\";\n", self.n, sh.case));
        }
        for v in &self.vertices {
            let name = if v.is_empty() { "ε" } else { v };
            s.push_str(&format!("  \"{name}\";\n"));
        }
        for &(p, q) in &self.edges {
            let name = |x: usize| if self.vertices[x].is_empty() { "ε".to_string() } else { self.vertices[x].clone() };
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", name(p), name(q)));
        }
        s.push_str("}\n");
        s
    }
}

fn two_cycles(count: usize, edges: &[(usize, usize)]) -> Option<TwoCycles> {
    let mut succ: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut indeg = vec![0usize; count];
    for &(p, q) in edges {
        succ.entry(p).or_default().push(q);
        indeg[q] += 1;
    }
    let branching: Vec<usize> = (0..count).filter(|x| succ.get(x).map_or(0, Vec::len) == 2).collect();
    let merging: Vec<usize> = (0..count).filter(|&x| indeg[x] == 2).collect();
    if branching.len() != 1 || merging.len() != 1 || edges.len() != count + 1 {
        return None;
    }
    if (0..count).any(|x| succ.get(&x).map_or(0, Vec::len) == 0 || indeg[x] == 0) {
        return None;
    }
    let right = branching[0];
    let left = merging[0];
    let mut cycles: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (c, &start) in succ[&right].iter().enumerate() {
        let mut path = vec![right];
        let mut x = start;
        while x != right {
            if path.len() > count {
                return None;
            }
            path.push(x);
            x = succ[&x][0];
        }
        cycles[c] = path;
    }
    let covered: BTreeSet<usize> = cycles.iter().flatten().copied().collect();
    if covered.len() != count {
        return None;
    }
    let other: BTreeSet<usize> = cycles[1].iter().copied().collect();
    let shared: Vec<usize> = cycles[0].iter().copied().filter(|x| other.contains(x)).collect();
    // the overlap must be the path from the merge vertex to the branch vertex
    let mut walk = vec![left];
    let mut x = left;
    while x != right {
        x = succ[&x][0];
        walk.push(x);
        if walk.len() > count {
            return None;
        }
    }
    let walk_set: BTreeSet<usize> = walk.iter().copied().collect();
    if walk_set != shared.iter().copied().collect() {
        return None;
    }
    let case = if left == right { RauzyCase::SharedVertex } else { RauzyCase::SharedSegment };
    Some(TwoCycles { case, cycles, shared: walk })
}

/// Vertices are the n-factors, edges the (n+1)-factors.
pub fn word_rauzy_graph(w: &[u8], n: usize) -> Result<RauzyGraph, WordError> {
    check_length(w, n + 1)?;
    let verts: Vec<&[u8]> = factors(w, n).into_iter().collect();
    let pos: BTreeMap<&[u8], usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let edges: Vec<(usize, usize)> = factors(w, n + 1).into_iter().map(|f| (pos[&f[..n]], pos[&f[1..]])).collect();
    let shape = two_cycles(verts.len(), &edges);
    Ok(RauzyGraph { n, vertices: verts.iter().map(|v| word_string(v)).collect(), edges, shape })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden() -> Surd {
        Surd { a: 3, b: -1, d: 5, c: 2 }
    }

    #[test]
    fn fibonacci_by_formula() {
        let w = mechanical_word(&golden(), &golden(), 10, Rounding::Floor).unwrap();
        assert_eq!(word_string(&w), "0100101001");
    }

    #[test]
    fn single_moves_from_the_start_pair() {
        assert_eq!(apply_r(&[0], &[1]), (vec![0], vec![0, 1]));
        assert_eq!(apply_l(&[0], &[1]), (vec![1, 0], vec![1]));
    }

    #[test]
    fn quotients_of_known_surds() {
        assert_eq!(golden().continued_fraction(6), vec![2, 1, 1, 1, 1, 1]);
        let root2 = Surd { a: -1, b: 1, d: 2, c: 1 };
        assert_eq!(root2.continued_fraction(5), vec![2, 2, 2, 2, 2]);
        assert_eq!(Surd::rational(3, 7).continued_fraction(9), vec![2, 3]);
    }

    #[test]
    fn exact_floor_near_integers() {
        // sqrt(10^12 + 1) is just above 10^6
        let x = Surd { a: 0, b: 1, d: 1_000_000_000_001, c: 1 };
        assert_eq!(x.floor(), 1_000_000);
        assert_eq!(x.ceil(), 1_000_001);
        let y = Surd { a: 0, b: -1, d: 4, c: 1 };
        assert_eq!((y.floor(), y.ceil()), (-2, -2));
    }

    #[test]
    fn number_syntax() {
        assert_eq!(parse_number("(3-sqrt(5))/2").unwrap(), golden());
        assert_eq!(parse_number("sqrt(2)-1").unwrap(), Surd { a: -1, b: 1, d: 2, c: 1 });
        assert_eq!(parse_number("(1+2*sqrt(3))/4").unwrap(), Surd { a: 1, b: 2, d: 3, c: 4 });
        assert_eq!(parse_number("5/13").unwrap(), Surd::rational(5, 13));
        assert!(parse_number("pi").is_err());
    }

    #[test]
    fn rationals_need_a_large_denominator() {
        let w = mechanical_word(&Surd::rational(51, 100), &Surd::rational(0, 1), 4, Rounding::Floor).unwrap();
        let direct: Vec<u8> = (0..4).map(|n| ((n + 1) * 51 / 100 - n * 51 / 100) as u8).collect();
        assert_eq!(w, direct);
        assert!(matches!(
            mechanical_word(&Surd::rational(1, 3), &Surd::rational(0, 1), 4, Rounding::Floor),
            Err(WordError::PrecisionInsufficient { .. })
        ));
    }

    #[test]
    fn complexity_of_simple_words() {
        assert_eq!(word_complexity(&[0; 50], 7), 1);
        let alt: Vec<u8> = (0..50).map(|k| (k % 2) as u8).collect();
        assert_eq!(word_complexity(&alt, 3), 2);
        assert!(asserted_complexity(&alt, 3).is_err());
    }

    #[test]
    fn fibonacci_rauzy_graphs() {
        let w = mechanical_word(&golden(), &golden(), 400, Rounding::Floor).unwrap();
        let g1 = word_rauzy_graph(&w, 1).unwrap();
        assert_eq!(g1.vertices, vec!["0", "1"]);
        assert_eq!(g1.edges, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(g1.shape.unwrap().case, RauzyCase::SharedVertex);
        let g2 = word_rauzy_graph(&w, 2).unwrap();
        assert_eq!(g2.shape.unwrap().case, RauzyCase::SharedSegment);
        // a periodic word is a single cycle
        let alt: Vec<u8> = (0..400).map(|k| (k % 2) as u8).collect();
        assert!(word_rauzy_graph(&alt, 3).unwrap().shape.is_none());
    }

    #[test]
    fn induction_lengths_and_prefixes() {
        let ind = cf_induction(&[2, 1, 1, 1, 1, 1, 1, 1], 8);
        let mut prev = (vec![0u8], vec![1u8]);
        for (u, v) in &ind.history {
            let right = *u == prev.0 && *v == [&prev.0[..], &prev.1[..]].concat();
            let left = *v == prev.1 && *u == [&prev.1[..], &prev.0[..]].concat();
            assert!(right || left);
            let (short, long) = if u.len() <= v.len() { (u, v) } else { (v, u) };
            assert!(long.starts_with(short));
            prev = (u.clone(), v.clone());
        }
        let w = mechanical_word(&golden(), &golden(), 30, Rounding::Floor).unwrap();
        assert!(ind.prefix().len() >= 30);
        assert_eq!(&ind.prefix()[..30], &w[..]);
    }

    proptest! {
        #[test]
        fn floor_matches_float_away_from_integers(a in -1000i128..1000, b in -50i128..50, d in 2i128..50, c in 1i128..60) {
            let s = Surd { a, b, d, c };
            let x = s.approx();
            prop_assume!((x - x.round()).abs() > 1e-6);
            prop_assert_eq!(s.floor(), x.floor() as i128);
        }

        #[test]
        fn floor_and_ceil_words_agree_for_surds(d in prop::sample::select(vec![2i128, 3, 5, 6, 7]), a in 0i128..5, b in 1i128..3, c in 3i128..12) {
            let theta = Surd { a: -a, b, d, c };
            let x = theta.approx();
            prop_assume!(x > 0.0 && x < 1.0);
            let f = mechanical_word(&theta, &theta, 60, Rounding::Floor).unwrap();
            let g = mechanical_word(&theta, &theta, 60, Rounding::Ceil).unwrap();
            prop_assert_eq!(f, g);
        }
    }
}
