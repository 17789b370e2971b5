//! Airy function of the first kind and its derivative.
//!
//! The Maclaurin series for Ai suffers severe cancellation away from the
//! origin (the two component series grow like exp((2/3)|x|^{3/2}) while the
//! result decays), so the series is summed in double-double arithmetic,
//! which keeps roughly 32 significant digits through the cancellation. For
//! |x| beyond the series range the standard asymptotic expansions take over;
//! there they are accurate to well below 1e-14 relative.

/// Double-double value: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    fn div_f64(self, c: f64) -> Dd {
        let q = self.hi / c;
        let (p, e) = two_prod(q, c);
        let r = ((self.hi - p) - e + self.lo) / c;
        let (hi, lo) = quick_two_sum(q, r);
        Dd { hi, lo }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

// Ai(0) = 3^{-2/3} / Gamma(2/3) and Ai'(0) = -3^{-1/3} / Gamma(1/3),
// split to double-double precision.
const AI0: Dd = Dd {
    hi: 0.355_028_053_887_817_2,
    lo: 2.052_336_324_362_12e-17,
};
const AIP0: Dd = Dd {
    hi: -0.258_819_403_792_806_8,
    lo: 2.522_243_111_610_832e-17,
};

const SERIES_CUT: f64 = 10.25;

/// Ai(x); relative accuracy better than 1e-12 for |x| <= 10 and
/// ~1e-14 outside the series range.
pub fn airy_ai(x: f64) -> f64 {
    assert!(x.is_finite(), "airy_ai requires finite input");
    if x.abs() <= SERIES_CUT {
        series(x).0
    } else if x > 0.0 {
        asymptotic_pos(x).0
    } else {
        asymptotic_neg(x).0
    }
}

/// Ai'(x), same accuracy profile as [`airy_ai`].
pub fn airy_ai_prime(x: f64) -> f64 {
    assert!(x.is_finite(), "airy_ai_prime requires finite input");
    if x.abs() <= SERIES_CUT {
        series(x).1
    } else if x > 0.0 {
        asymptotic_pos(x).1
    } else {
        asymptotic_neg(x).1
    }
}

/// Maclaurin series in double-double arithmetic. Returns (Ai, Ai').
///
/// With f'' = x f, f(0)=1, f'(0)=0 and g'' = x g, g(0)=0, g'(0)=1:
/// Ai = Ai(0) f + Ai'(0) g.
fn series(x: f64) -> (f64, f64) {
    let xd = Dd::from_f64(x);
    let x2 = xd.mul(xd);
    let x3 = x2.mul(xd);

    let mut term_f = Dd::from_f64(1.0);
    let mut term_g = xd;
    let mut f = term_f;
    let mut g = term_g;
    let mut fp = Dd::ZERO;
    let mut gp = Dd::from_f64(1.0);

    for k in 1..400 {
        let k3 = 3.0 * k as f64;
        let new_fp = term_f.mul(x2).div_f64(k3 - 1.0);
        let new_gp = term_g.mul(x2).div_f64(k3);
        term_f = term_f.mul(x3).div_f64(k3 * (k3 - 1.0));
        term_g = term_g.mul(x3).div_f64(k3 * (k3 + 1.0));
        f = f.add(term_f);
        g = g.add(term_g);
        fp = fp.add(new_fp);
        gp = gp.add(new_gp);
        if term_f.hi.abs() < 1e-40 * f.hi.abs().max(1.0)
            && term_g.hi.abs() < 1e-40 * g.hi.abs().max(1.0)
        {
            break;
        }
    }

    let ai = AI0.mul(f).add(AIP0.mul(g));
    let aip = AI0.mul(fp).add(AIP0.mul(gp));
    (ai.to_f64(), aip.to_f64())
}

/// Expansion coefficients u_k and v_k = u_k (6k+1)/(1-6k) of the large-|x|
/// asymptotic series, with u_{k+1} = u_k (6k+1)(6k+5) / (72 (k+1)).
fn asymptotic_coeffs(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(count);
    let mut v = Vec::with_capacity(count);
    let mut uk = 1.0;
    for k in 0..count {
        let kk = k as f64;
        u.push(uk);
        v.push(uk * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk));
        uk *= (6.0 * kk + 1.0) * (6.0 * kk + 5.0) / (72.0 * (kk + 1.0));
    }
    (u, v)
}

/// Exponentially decaying expansion for x >> 0. Returns (Ai, Ai').
fn asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_coeffs(30);
    let mut sum_ai = 0.0;
    let mut sum_aip = 0.0;
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / zk;
        if term.abs() >= prev {
            break; // divergent tail of the asymptotic series
        }
        prev = term.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum_ai += sign * term;
        sum_aip += sign * v[k] / zk;
        zk *= zeta;
    }
    let spi2 = 2.0 * std::f64::consts::PI.sqrt();
    let ai = (-zeta).exp() / (spi2 * x.powf(0.25)) * sum_ai;
    let aip = -(x.powf(0.25) * (-zeta).exp() / spi2) * sum_aip;
    (ai, aip)
}

/// Oscillatory expansion for x << 0. Returns (Ai, Ai').
fn asymptotic_neg(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    let (u, v) = asymptotic_coeffs(30);

    // cos-series over even k, sin-series over odd k, each alternating.
    let mut ai_cos = 0.0;
    let mut ai_sin = 0.0;
    let mut aip_sin = 0.0;
    let mut aip_cos = 0.0;
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / zk;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ai_cos += sign * term;
            aip_sin += sign * v[k] / zk;
        } else {
            ai_sin += sign * term;
            aip_cos += sign * v[k] / zk;
        }
        zk *= zeta;
    }

    let front = 1.0 / (std::f64::consts::PI.sqrt() * z.powf(0.25));
    let ai = front * (phase.cos() * ai_cos + phase.sin() * ai_sin);
    let front_p = z.powf(0.25) / std::f64::consts::PI.sqrt();
    let aip = front_p * (phase.sin() * aip_sin - phase.cos() * aip_cos);
    (ai, aip)
}
