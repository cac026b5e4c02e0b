//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigfol::exactalg::poly::monomials_of_degree;
use rigfol::exactalg::{FieldElem, Poly};
use rigfol::multical::{tuples, PForm, VField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Homogeneous polynomial with at most `terms` monomials and small integer coefficients.
pub fn poly(r: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let mons = monomials_of_degree(nvars, deg);
    let picked: Vec<_> = mons.choose_multiple(r, terms.min(mons.len())).cloned().collect();
    Poly::from_terms(nvars, picked.into_iter().map(|e| (e, FieldElem::from_int(r.gen_range(-3..=3)))))
}

pub fn field(r: &mut ChaCha8Rng, nvars: usize, deg: u32) -> VField {
    VField::new((0..nvars).map(|_| poly(r, nvars, deg, 3)).collect()).unwrap()
}

/// Homogeneous `p`-form with coefficients of degree `deg`, about half the entries nonzero.
pub fn form(r: &mut ChaCha8Rng, nvars: usize, p: usize, deg: u32) -> PForm {
    let entries: Vec<_> = tuples(nvars, p).into_iter().filter(|_| r.gen_bool(0.5)).collect();
    PForm::from_entries(nvars, p, entries.into_iter().map(|t| (t, poly(r, nvars, deg, 3))))
}

/// One random instance: variable count, degree, arity.
pub struct Shape {
    pub nvars: usize,
    pub deg: u32,
    pub p: usize,
}

pub fn shape(r: &mut ChaCha8Rng) -> Shape {
    let nvars = r.gen_range(2..=6);
    Shape { nvars, deg: r.gen_range(0..=3), p: r.gen_range(1..nvars) }
}

pub fn fe(v: i64) -> FieldElem {
    FieldElem::from_int(v)
}

/// The calculus identities on one seeded instance, by name.
pub fn calculus_instance(seed: u64) -> Vec<(&'static str, bool)> {
    let mut r = rng(seed);
    let Shape { nvars, deg, p } = shape(&mut r);
    let w = form(&mut r, nvars, p, deg);
    let (dx, dy) = (r.gen_range(0..=2), r.gen_range(0..=2));
    let x = field(&mut r, nvars, dx);
    let y = field(&mut r, nvars, dy);
    let rad = VField::radial(nvars);
    let scalar = |k: i64| FieldElem::from_int(k);

    let d_squared = w.d().d().is_zero();

    let xy = x.bracket(&y).unwrap();
    let lhs = w.interior(&y).unwrap().lie_derivative(&x).unwrap().sub(&w.lie_derivative(&x).unwrap().interior(&y).unwrap());
    let lie_interior = lhs == w.interior(&xy).unwrap();

    let euler = w.lie_derivative(&rad).unwrap() == w.scale(&scalar(deg as i64 + p as i64));

    let beta = form(&mut r, nvars, p + 1, deg.max(1) - 1);
    let v = beta.interior(&rad).unwrap();
    let (vd, vp) = (deg.max(1) as i64, p as i64);
    let radial_d = v.interior(&rad).unwrap().is_zero() && v.d().interior(&rad).unwrap() == v.scale(&scalar(vd + vp));

    let div = xy.divergence() == x.apply(&y.divergence()) - y.apply(&x.divergence());

    let xd = x.degree().map_or(0, |d| d as i64);
    let radial_bracket = x.bracket(&rad).unwrap() == x.scale(&scalar(1 - xd));

    let cartan = w.lie_derivative(&x).unwrap() == w.lie_derivative_direct(&x).unwrap();

    vec![
        ("d squared", d_squared),
        ("[L_X, i_Y] = i_[X,Y]", lie_interior),
        ("L_R w = (d+p) w", euler),
        ("i_R dw = (d+p) w", radial_d),
        ("div bracket", div),
        ("[X, R] = (1-d) X", radial_bracket),
        ("Cartan = direct", cartan),
    ]
}

/// `s` with `a = s·b`, if one exists.
pub fn scalar_ratio(a: &PForm, b: &PForm) -> Option<FieldElem> {
    let (idx, fb) = b.terms().next()?;
    let fa = a.coeff(idx);
    let (e, cb) = fb.terms().next()?;
    let s = fa.coeff(e).checked_div(cb).ok()?;
    (a == &b.scale(&s)).then_some(s)
}

/// The three minors used for the containment `sing(dω) ⊂ {z_n = z_{n−1} = z_{n−2} = 0}`:
/// drop columns 0, 1; then `z_n = 0`, drop 0 and n; then `z_{n−1} = z_n = 0`, drop n−1 and n.
pub fn containment_minors(m: &rigfol::singdim::MinorMatrix) -> [(usize, Poly); 3] {
    use rigfol::singdim::selected_minor;
    let n = m.n;
    let first = selected_minor(m, &(2..=n).collect::<Vec<_>>()).unwrap();
    let m1 = m.specialize_zero(n);
    let second = selected_minor(&m1, &(1..n).collect::<Vec<_>>()).unwrap();
    let m2 = m1.specialize_zero(n - 1);
    let third = selected_minor(&m2, &(0..=n - 2).collect::<Vec<_>>()).unwrap();
    [(n, first), (n - 1, second), (n - 2, third)]
}

/// Nonzero `c` with `f = c·z_var^k`.
pub fn pure_power(f: &Poly, var: usize, k: u32) -> Option<FieldElem> {
    let mut terms = f.terms();
    let (e, c) = terms.next()?;
    let ok = terms.next().is_none() && e.iter().enumerate().all(|(i, &x)| x == if i == var { k } else { 0 });
    ok.then(|| c.clone())
}

/// Determinant by the permutation expansion.
pub fn leibniz(m: &[Vec<Poly>]) -> Poly {
    let k = m.len();
    let nv = m[0][0].nvars();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut acc = Poly::zero(nv);
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut t = Poly::one(nv);
        for (r, &c) in p.iter().enumerate() {
            t = &t * &m[r][c];
        }
        acc = if inversions % 2 == 0 { &acc + &t } else { &acc - &t };
    });
    acc
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}
