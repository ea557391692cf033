//! The (2,2) divisor on P^2 x P^2, its two quadric sextets, discriminant
//! matrices, double-sextic equations and minors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{to_integral, HomPoly};
use crate::{QPoly, ZPoly};

/// Exponents of the six quadratic monomials, in slot order
/// `s0^2, s0*s1, s0*s2, s1^2, s1*s2, s2^2`.
pub const QUADRATIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

pub const FORM_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Which factor of P^2 x P^2 the sextet's quadrics live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Quadrics in `x`, fibred over the first factor (gives X_1).
    X,
    /// Quadrics in `y`, fibred over the second factor (gives X_2).
    Y,
}

impl Side {
    pub fn letter(&self) -> char {
        match self {
            Side::X => 'x',
            Side::Y => 'y',
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            Side::X => 1,
            Side::Y => 2,
        }
    }
}

/// A (2,2) form: `coeffs[i][j]` multiplies x-monomial `i` times y-monomial `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiForm22 {
    coeffs: [[BigInt; 6]; 6],
}

impl BiForm22 {
    pub fn new(coeffs: [[BigInt; 6]; 6]) -> Result<Self> {
        if coeffs.iter().flatten().all(|c| c.is_zero()) {
            return Err(Error::invalid("(2,2) form is identically zero"));
        }
        Ok(BiForm22 { coeffs })
    }

    pub fn coeff(&self, x_slot: usize, y_slot: usize) -> &BigInt {
        &self.coeffs[x_slot][y_slot]
    }

    /// Rebuilds the form from the x-side sextet (`Z = sum_j Q_j(x) y^m_j`).
    pub fn from_sextet(q: &QuadricSextet) -> Result<Self> {
        let mut c: [[BigInt; 6]; 6] = Default::default();
        for (j, form) in q.forms.iter().enumerate() {
            for (i, m) in QUADRATIC_MONOMIALS.iter().enumerate() {
                let v = form.coeff(*m);
                if !v.denom().is_one() {
                    return Err(Error::IntegralityViolation(FORM_NAMES[j].to_string()));
                }
                match q.side {
                    Side::X => c[i][j] = v.numer().clone(),
                    Side::Y => c[j][i] = v.numer().clone(),
                }
            }
        }
        BiForm22::new(c)
    }

    /// Parses the divisor file format: `x0^2 y0^2 : -5` per line, `#`
    /// comments, missing monomials are zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs: [[Option<BigInt>; 6]; 6] = Default::default();
        let mut any = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let colon = line
                .find(':')
                .ok_or_else(|| Error::parse(line_no, line.len() + 1, "expected ':'"))?;
            let (x_slot, y_slot) = parse_bimonomial(&line[..colon], line_no)?;
            let value_str = line[colon + 1..].trim();
            let value_col = colon + 2 + (line[colon + 1..].len() - line[colon + 1..].trim_start().len());
            let value: BigInt = value_str
                .parse()
                .map_err(|_| Error::parse(line_no, value_col, format!("bad integer '{}'", value_str)))?;
            if coeffs[x_slot][y_slot].is_some() {
                return Err(Error::parse(line_no, 1, "duplicate monomial"));
            }
            coeffs[x_slot][y_slot] = Some(value);
            any = true;
        }
        if !any {
            return Err(Error::parse(1, 1, "no coefficients in divisor file"));
        }
        let c = coeffs.map(|row| row.map(|v| v.unwrap_or_default()));
        BiForm22::new(c).map_err(|_| Error::parse(1, 1, "divisor is identically zero"))
    }

    /// Serialises to the divisor file format (nonzero coefficients only).
    pub fn to_file_text(&self) -> String {
        let mut out = String::new();
        for j in 0..6 {
            for i in 0..6 {
                let c = &self.coeffs[i][j];
                if !c.is_zero() {
                    out.push_str(&format!(
                        "{} {} : {}\n",
                        monomial_label('x', i),
                        monomial_label('y', j),
                        c
                    ));
                }
            }
        }
        out
    }
}

fn monomial_label(letter: char, slot: usize) -> String {
    ["{0}0^2", "{0}0*{0}1", "{0}0*{0}2", "{0}1^2", "{0}1*{0}2", "{0}2^2"][slot].replace("{0}", &letter.to_string())
}

fn parse_bimonomial(s: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut x = [0u32; 3];
    let mut y = [0u32; 3];
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        if c.is_whitespace() || c == '*' {
            pos += 1;
            continue;
        }
        let target = match c {
            'x' => &mut x,
            'y' => &mut y,
            _ => return Err(Error::parse(line_no, pos + 1, format!("unexpected '{}'", c))),
        };
        pos += 1;
        let idx = match chars.get(pos) {
            Some(d @ '0'..='2') => *d as usize - '0' as usize,
            _ => return Err(Error::parse(line_no, pos + 1, "expected variable index 0, 1 or 2")),
        };
        pos += 1;
        let mut e = 1u32;
        if chars.get(pos) == Some(&'^') {
            pos += 1;
            let start = pos;
            while chars.get(pos).is_some_and(|d| d.is_ascii_digit()) {
                pos += 1;
            }
            if start == pos {
                return Err(Error::parse(line_no, pos + 1, "expected exponent"));
            }
            e = chars[start..pos].iter().collect::<String>().parse().unwrap_or(u32::MAX);
        }
        target[idx] = target[idx].saturating_add(e);
    }
    let slot = |e: [u32; 3], letter: char| {
        QUADRATIC_MONOMIALS
            .iter()
            .position(|m| *m == e)
            .ok_or_else(|| Error::parse(line_no, 1, format!("{}-part is not a quadratic monomial", letter)))
    };
    Ok((slot(x, 'x')?, slot(y, 'y')?))
}

/// The six ternary quadrics `A..F` of one side.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricSextet {
    pub forms: [QPoly; 6],
    pub side: Side,
}

impl QuadricSextet {
    pub fn new(forms: [QPoly; 6], side: Side) -> Result<Self> {
        for (f, name) in forms.iter().zip(FORM_NAMES) {
            if !f.is_zero() && f.degree() != 2 {
                return Err(Error::invalid(format!("{} is not a quadric", name)));
            }
        }
        Ok(QuadricSextet {
            forms: forms.map(|f| if f.is_zero() { QPoly::zero(2) } else { f }),
            side,
        })
    }

    /// Builds a sextet from integer coefficient rows in slot order.
    pub fn from_coefficients(rows: [[i64; 6]; 6], side: Side) -> Self {
        let forms = rows.map(|row| {
            HomPoly::from_terms(
                2,
                row.iter()
                    .zip(QUADRATIC_MONOMIALS)
                    .map(|(&c, m)| (BigRational::from_integer(c.into()), m)),
            )
            .expect("quadratic monomials")
        });
        QuadricSextet { forms, side }
    }

    pub fn a(&self) -> &QPoly {
        &self.forms[0]
    }
    pub fn b(&self) -> &QPoly {
        &self.forms[1]
    }
    pub fn c(&self) -> &QPoly {
        &self.forms[2]
    }
    pub fn d(&self) -> &QPoly {
        &self.forms[3]
    }
    pub fn e(&self) -> &QPoly {
        &self.forms[4]
    }
    pub fn f(&self) -> &QPoly {
        &self.forms[5]
    }

    /// Positional coefficient, e.g. `slot_coeff(0, 0)` is `A_1`.
    pub fn slot_coeff(&self, form: usize, slot: usize) -> BigRational {
        self.forms[form].coeff(QUADRATIC_MONOMIALS[slot])
    }

    pub fn neg(&self) -> Self {
        QuadricSextet {
            forms: self.forms.clone().map(|f| -f),
            side: self.side,
        }
    }
}

impl fmt::Display for QuadricSextet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.side == Side::Y { "'" } else { "" };
        for (form, name) in self.forms.iter().zip(FORM_NAMES) {
            writeln!(
                f,
                "{}{} = {}",
                name,
                prime,
                form.to_string_with(&self.side.letter().to_string())
            )?;
        }
        Ok(())
    }
}

pub fn extract_quadrics(z: &BiForm22, side: Side) -> QuadricSextet {
    let forms = std::array::from_fn(|j| {
        let terms = QUADRATIC_MONOMIALS.iter().enumerate().map(|(i, m)| {
            let c = match side {
                Side::X => z.coeffs[i][j].clone(),
                Side::Y => z.coeffs[j][i].clone(),
            };
            (BigRational::from_integer(c), *m)
        });
        HomPoly::from_terms(2, terms).expect("quadratic monomials")
    });
    QuadricSextet { forms, side }
}

/// The symmetric matrix `[[2A, B, C], [B, 2D, E], [C, E, 2F]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantMatrix {
    pub entries: [[QPoly; 3]; 3],
    pub side: Side,
}

impl DiscriminantMatrix {
    pub fn det(&self) -> QPoly {
        let m = &self.entries;
        let minor =
            |r0: usize, r1: usize, c0: usize, c1: usize| &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0]);
        let t0 = &m[0][0] * &minor(1, 2, 1, 2);
        let t1 = &m[0][1] * &minor(1, 2, 0, 2);
        let t2 = &m[0][2] * &minor(1, 2, 0, 1);
        &(&t0 - &t1) + &t2
    }
}

pub fn discriminant_matrix(q: &QuadricSextet) -> DiscriminantMatrix {
    let two = BigRational::from_integer(2.into());
    let [a, b, c, d, e, f] = &q.forms;
    DiscriminantMatrix {
        entries: [
            [a.scale(&two), b.clone(), c.clone()],
            [b.clone(), d.scale(&two), e.clone()],
            [c.clone(), e.clone(), f.scale(&two)],
        ],
        side: q.side,
    }
}

/// A double sextic `w^2 = g(s0, s1, s2)` in P(1,1,1,3).
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleSexticSurface {
    pub g: ZPoly,
    pub letter: char,
}

impl DoubleSexticSurface {
    pub fn new(g: ZPoly, letter: char) -> Result<Self> {
        if g.degree() != 6 && !g.is_zero() {
            return Err(Error::invalid(format!("expected a sextic, got degree {}", g.degree())));
        }
        Ok(DoubleSexticSurface { g, letter })
    }

    pub fn g_rational(&self) -> QPoly {
        crate::poly::to_rational(&self.g)
    }

    pub fn eval_int(&self, pt: &[BigInt; 3]) -> BigInt {
        self.g.eval(pt)
    }

    /// `w^2 = <g>` in canonical text.
    pub fn equation(&self) -> String {
        format!("w^2 = {}", self.g.to_string_with(&self.letter.to_string()))
    }

    /// Parses a `w^2 = <sextic>` line (the `w^2 =` prefix is optional).
    pub fn parse(text: &str) -> Result<Self> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (body, offset) = match line.find('=') {
                Some(k) => (&line[k + 1..], k + 1),
                None => (line, 0),
            };
            let (g, letter) = crate::poly::parse_hompoly(body, i + 1).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column: column + offset,
                    message,
                },
                other => other,
            })?;
            let g = to_integral(&g, "sextic")
                .map_err(|_| Error::parse(i + 1, 1, "sextic must have integer coefficients"))?;
            return DoubleSexticSurface::new(g, letter).map_err(|e| Error::parse(i + 1, 1, e.to_string()));
        }
        Err(Error::parse(1, 1, "no equation found"))
    }
}

/// `g = -1/2 det(M)`; fails unless every coefficient of `g` is an integer.
pub fn k3_equation(m: &DiscriminantMatrix) -> Result<DoubleSexticSurface> {
    let half = BigRational::new((-1).into(), 2.into());
    let g = m.det().scale(&half);
    let g = if g.is_zero() { QPoly::zero(6) } else { g };
    let g = to_integral(&g, "-1/2 det(M)")?;
    Ok(DoubleSexticSurface {
        g,
        letter: m.side.letter(),
    })
}

/// `M_A = 4DF - E^2`, `M_D = 4AF - C^2`, `M_F = 4AD - B^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorTriple {
    pub m_a: QPoly,
    pub m_d: QPoly,
    pub m_f: QPoly,
}

pub fn minors(q: &QuadricSextet) -> MinorTriple {
    let four = BigRational::from_integer(4.into());
    let [a, b, c, d, e, f] = &q.forms;
    let m = |x: &QPoly, y: &QPoly, z: &QPoly| {
        let r = &(x * y).scale(&four) - &(z * z);
        if r.is_zero() {
            QPoly::zero(4)
        } else {
            r
        }
    };
    MinorTriple {
        m_a: m(d, f, e),
        m_d: m(a, f, c),
        m_f: m(a, d, b),
    }
}

/// Everything derived from one divisor.
#[derive(Clone, Debug)]
pub struct DerivedSurfaces {
    pub divisor: BiForm22,
    pub x_side: QuadricSextet,
    pub y_side: QuadricSextet,
    pub x1: DoubleSexticSurface,
    pub x2: DoubleSexticSurface,
}

impl DerivedSurfaces {
    pub fn from_divisor(z: &BiForm22) -> Result<Self> {
        let x_side = extract_quadrics(z, Side::X);
        let y_side = extract_quadrics(z, Side::Y);
        let x1 = k3_equation(&discriminant_matrix(&x_side))?;
        let x2 = k3_equation(&discriminant_matrix(&y_side))?;
        Ok(DerivedSurfaces {
            divisor: z.clone(),
            x_side,
            y_side,
            x1,
            x2,
        })
    }

    pub fn side(&self, side: Side) -> (&QuadricSextet, &DoubleSexticSurface) {
        match side {
            Side::X => (&self.x_side, &self.x1),
            Side::Y => (&self.y_side, &self.x2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    pub(crate) fn bundled_divisor() -> BiForm22 {
        BiForm22::parse(include_str!("../data/counterexample.divisor")).unwrap()
    }

    #[test]
    fn extract_x_side_matches_printed_quadrics() {
        let s = extract_quadrics(&bundled_divisor(), Side::X);
        assert_eq!(s.a().to_string(), "-5*x0^2 - 4*x1^2 + 4*x0*x2 + 2*x1*x2 - 4*x2^2");
        assert_eq!(s.a().eval(&[q(1), q(0), q(0)]), q(-5));
        assert_eq!(s.e().eval(&[q(0), q(1), q(0)]), q(3));
    }

    #[test]
    fn extract_y_side() {
        let s = extract_quadrics(&bundled_divisor(), Side::Y);
        assert_eq!(s.a().coeff([2, 0, 0]), q(-5));
        assert_eq!(s.side, Side::Y);
    }

    #[test]
    fn single_monomial_divisor() {
        let mut c: [[BigInt; 6]; 6] = Default::default();
        c[0][0] = 1.into();
        let z = BiForm22::new(c).unwrap();
        for side in [Side::X, Side::Y] {
            let s = extract_quadrics(&z, side);
            assert_eq!(s.a(), &QPoly::monomial(q(1), [2, 0, 0]));
            assert!(s.forms[1..].iter().all(|f| f.is_zero()));
        }
    }

    #[test]
    fn round_trip_both_sides() {
        let z = bundled_divisor();
        for side in [Side::X, Side::Y] {
            assert_eq!(BiForm22::from_sextet(&extract_quadrics(&z, side)).unwrap(), z);
        }
        assert_eq!(BiForm22::parse(&z.to_file_text()).unwrap(), z);
    }

    #[test]
    fn discriminant_matrix_entries() {
        let s = extract_quadrics(&bundled_divisor(), Side::X);
        let m = discriminant_matrix(&s);
        assert_eq!(
            m.entries[0][0].to_string(),
            "-10*x0^2 - 8*x1^2 + 8*x0*x2 + 4*x1*x2 - 8*x2^2"
        );
        assert_eq!(m.entries[0][1], m.entries[1][0]);
        assert_eq!(&m.entries[0][1], s.b());
        let zero = QuadricSextet::new(std::array::from_fn(|_| QPoly::zero(2)), Side::X).unwrap();
        let mz = discriminant_matrix(&zero);
        assert!(mz.entries.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn k3_equations_of_counterexample() {
        let d = DerivedSurfaces::from_divisor(&bundled_divisor()).unwrap();
        assert_eq!(d.x1.g.coeff([6, 0, 0]), BigInt::from(-4));
        assert_eq!(d.x1.g.coeff([5, 1, 0]), BigInt::from(-308));
        assert_eq!(d.x2.g.coeff([6, 0, 0]), BigInt::from(236));
        assert_eq!(d.x2.g.coeff([5, 1, 0]), BigInt::from(-740));
        assert_eq!(d.x2.g.coeff([0, 0, 6]), BigInt::from(40));
        assert!(d.x1.equation().starts_with("w^2 = -4*x0^6 - 308*x0^5*x1"));
    }

    #[test]
    fn diagonal_sextet_gives_minus_four_cube() {
        let s = QPoly::from_terms(2, vec![(q(1), [2, 0, 0]), (q(3), [0, 1, 1])]).unwrap();
        let z = QPoly::zero(2);
        let sext = QuadricSextet::new(
            [s.clone(), z.clone(), z.clone(), s.clone(), z.clone(), s.clone()],
            Side::X,
        )
        .unwrap();
        let g = k3_equation(&discriminant_matrix(&sext)).unwrap();
        let expect = s.pow(3).scale(&q(-4));
        assert_eq!(crate::poly::to_rational(&g.g), expect);
    }

    #[test]
    fn half_integral_sextet_is_rejected() {
        let half = QPoly::monomial(BigRational::new(1.into(), 2.into()), [2, 0, 0]);
        let z = QPoly::zero(2);
        let x = QPoly::monomial(q(1), [0, 2, 0]);
        let sext = QuadricSextet::new([half, z.clone(), z.clone(), x.clone(), z, x], Side::X).unwrap();
        // g = -4 * (1/2) x0^2 x1^4 is still integral
        assert!(k3_equation(&discriminant_matrix(&sext)).is_ok());
        let eighth = QPoly::monomial(BigRational::new(1.into(), 8.into()), [2, 0, 0]);
        let mut forms = sext.forms.clone();
        forms[0] = eighth;
        let sext = QuadricSextet::new(forms, Side::X).unwrap();
        assert!(matches!(
            k3_equation(&discriminant_matrix(&sext)),
            Err(Error::IntegralityViolation(_))
        ));
    }

    #[test]
    fn minors_examples() {
        let s = extract_quadrics(&bundled_divisor(), Side::X);
        let m = minors(&s);
        assert_eq!(m.m_f.eval(&[q(1), q(0), q(0)]), q(55));
        let x2 = QPoly::monomial(q(1), [2, 0, 0]);
        let all = QuadricSextet::new(std::array::from_fn(|_| x2.clone()), Side::X).unwrap();
        let m = minors(&all);
        let three = QPoly::monomial(q(3), [4, 0, 0]);
        assert_eq!(m.m_a, three);
        assert_eq!(m.m_d, three);
        assert_eq!(m.m_f, three);
    }

    #[test]
    fn divisor_parse_errors() {
        assert!(matches!(BiForm22::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(BiForm22::parse("# only comments\n"), Err(Error::Parse { .. })));
        match BiForm22::parse("x0^2 y0^2 : 1\nx0^2 y3^2 : 4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{:?}", other),
        }
        assert!(BiForm22::parse("x0^2 y0^2 : abc").is_err());
        assert!(BiForm22::parse("x0 y0^2 : 1").is_err());
        assert!(BiForm22::parse("x0^2 y0^2 : 1\nx0^2 y0^2 : 2").is_err());
    }

    #[test]
    fn surface_parse() {
        let s = DoubleSexticSurface::parse("# comment\nw^2 = x0^6 + x1^6 + x2^6\n").unwrap();
        assert_eq!(s.equation(), "w^2 = x0^6 + x1^6 + x2^6");
        assert!(DoubleSexticSurface::parse("w^2 = x0^5*x1 + 1/2*x2^6").is_err());
    }
}
