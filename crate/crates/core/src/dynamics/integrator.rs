//! Adaptive Dormand–Prince 8(5,3) integrator for complex-valued ODEs.
//!
//! Steps land exactly on every requested output time, so no dense output is
//! needed. Error control follows Hairer's DOP853: a fifth-order estimate
//! corrected by a third-order one, with per-component scale
//! `atol + rtol * max(|y|, |y_new|)` on complex magnitudes.

use crate::hilbert::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationError {
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy)]
pub struct Dop853 {
    pub tolerances: Tolerances,
    pub max_steps: usize,
    pub h_max: f64,
    safety: f64,
    // bounds on h_new / h
    fac_min: f64,
    fac_max: f64,
}

impl Dop853 {
    pub fn new(tolerances: Tolerances) -> Self {
        Dop853 {
            tolerances,
            max_steps: 10_000_000,
            h_max: f64::INFINITY,
            safety: 0.9,
            fac_min: 0.333,
            fac_max: 6.0,
        }
    }

    fn scale(&self, y: C64, y_new: C64) -> f64 {
        self.tolerances.atol + self.tolerances.rtol * y.norm().max(y_new.norm())
    }

    fn initial_step<F>(&self, f: &mut F, t0: f64, y0: &[C64], f0: &[C64], span: f64) -> f64
    where
        F: FnMut(f64, &[C64], &mut [C64]),
    {
        let n = y0.len() as f64;
        let rms = |v: &[C64]| -> f64 {
            (v.iter()
                .zip(y0)
                .map(|(x, y)| (x.norm() / self.scale(*y, *y)).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        };
        let d0 = rms(y0);
        let d1 = rms(f0);
        let mut h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.h_max).min(span);
        let y1: Vec<C64> = y0.iter().zip(f0).map(|(y, k)| y + k * h0).collect();
        let mut f1 = vec![C64::new(0.0, 0.0); y0.len()];
        f(t0 + h0, &y1, &mut f1);
        let diff: Vec<C64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
        let d2 = rms(&diff) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(1.0 / 8.0)
        };
        (100.0 * h0).min(h1).min(self.h_max).min(span)
    }

    /// Integrates `y' = f(t, y)` from `t0`, invoking `sink(k, y)` at each
    /// `outputs[k]`. Outputs must be non-decreasing and not before `t0`.
    pub fn integrate<F, S>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[C64],
        outputs: &[f64],
        mut sink: S,
    ) -> Result<IntegrationStats, IntegrationError>
    where
        F: FnMut(f64, &[C64], &mut [C64]),
        S: FnMut(usize, &[C64]),
    {
        let n = y0.len();
        let zero = C64::new(0.0, 0.0);
        let mut stats = IntegrationStats::default();
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut k: [Vec<C64>; 12] = std::array::from_fn(|_| vec![zero; n]);
        let mut stage = vec![zero; n];
        let mut y_new = vec![zero; n];

        f(t, &y, &mut k[0]);
        stats.evaluations += 1;

        let span = outputs.last().map_or(0.0, |&end| end - t0);
        let mut h = if span > 0.0 {
            stats.evaluations += 1;
            self.initial_step(&mut f, t, &y, &k[0], span)
        } else {
            0.0
        };
        let mut last_rejected = false;

        for (idx, &target) in outputs.iter().enumerate() {
            if target < t {
                return Err(IntegrationError {
                    t,
                    reason: format!("output time {target} precedes current time"),
                });
            }
            while t < target {
                if stats.accepted + stats.rejected >= self.max_steps {
                    return Err(IntegrationError {
                        t,
                        reason: "maximum number of steps exceeded".into(),
                    });
                }
                let remaining = target - t;
                let clamped = h >= remaining;
                let step = if clamped { remaining } else { h };
                if step.abs() <= 1e-14 * t.abs().max(1.0) && !clamped {
                    return Err(IntegrationError {
                        t,
                        reason: format!("step size underflow (h = {step:e})"),
                    });
                }

                // stages 2..=12
                for s in 1..12 {
                    for i in 0..n {
                        let mut acc = zero;
                        for (j, &a) in A[s].iter().enumerate().take(s) {
                            if a != 0.0 {
                                acc += k[j][i] * a;
                            }
                        }
                        stage[i] = y[i] + acc * step;
                    }
                    f(t + C[s] * step, &stage, &mut k[s]);
                }
                stats.evaluations += 11;

                // 8th-order solution (k[11] is the stage at t + h)
                for i in 0..n {
                    let mut acc = zero;
                    for (j, &b) in B.iter().enumerate() {
                        if b != 0.0 {
                            acc += k[j][i] * b;
                        }
                    }
                    y_new[i] = y[i] + acc * step;
                }
                let mut f_new = vec![zero; n];
                f(t + step, &y_new, &mut f_new);
                stats.evaluations += 1;

                let mut err5 = 0.0;
                let mut err3 = 0.0;
                for i in 0..n {
                    let sk = self.scale(y[i], y_new[i]);
                    let mut e3 = zero;
                    let mut e5 = zero;
                    for j in 0..12 {
                        e3 += k[j][i] * (B[j] - BHH[j]);
                        e5 += k[j][i] * ER[j];
                    }
                    err3 += (e3.norm() / sk).powi(2);
                    err5 += (e5.norm() / sk).powi(2);
                }
                let mut deno = err5 + 0.01 * err3;
                if deno <= 0.0 {
                    deno = 1.0;
                }
                let err = step.abs() * err5 * (1.0 / (deno * n as f64)).sqrt();
                if !err.is_finite() {
                    return Err(IntegrationError {
                        t,
                        reason: "non-finite error estimate".into(),
                    });
                }

                let fac11 = err.powf(1.0 / 8.0);
                let fac = (fac11 / self.safety).clamp(1.0 / self.fac_max, 1.0 / self.fac_min);
                let mut h_next = step / fac;

                if err <= 1.0 {
                    stats.accepted += 1;
                    t = if clamped { target } else { t + step };
                    std::mem::swap(&mut y, &mut y_new);
                    k[0].copy_from_slice(&f_new);
                    if last_rejected {
                        h_next = h_next.min(step);
                    }
                    last_rejected = false;
                    // a clamped step says nothing about the natural step size
                    h = if clamped { h.max(h_next) } else { h_next };
                } else {
                    stats.rejected += 1;
                    last_rejected = true;
                    h = step / (1.0 / self.fac_min).min(fac11 / self.safety);
                }
                h = h.min(self.h_max);
            }
            sink(idx, &y);
        }
        Ok(stats)
    }
}

// Dormand–Prince 8(5,3) tableau (Hairer, Nørsett & Wanner).
#[allow(clippy::excessive_precision)]
const C: [f64; 12] = [
    0.0,
    0.526001519587677318785587544488E-01,
    0.789002279381515978178381316732E-01,
    0.118350341907227396726757197510E+00,
    0.281649658092772603273242802490E+00,
    0.333333333333333333333333333333E+00,
    0.25E+00,
    0.307692307692307692307692307692E+00,
    0.651282051282051282051282051282E+00,
    0.6E+00,
    0.857142857142857142857142857142E+00,
    1.0,
];

#[allow(clippy::excessive_precision)]
const A: [[f64; 12]; 12] = [
    [0.0; 12],
    [
        5.26001519587677318785587544488E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.97250569845378994544595329183E-2,
        5.91751709536136983633785987549E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.95875854768068491816892993775E-2,
        0.0,
        8.87627564304205475450678981324E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.41365134159266685502369798665E-1,
        0.0,
        -8.84549479328286085344864962717E-1,
        9.24834003261792003115737966543E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.7037037037037037037037037037E-2,
        0.0,
        0.0,
        1.70828608729473871279604482173E-1,
        1.25467687566822425016691814123E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.7109375E-2,
        0.0,
        0.0,
        1.70252211019544039314978060272E-1,
        6.02165389804559606850219397283E-2,
        -1.7578125E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.70920001185047927108779319836E-2,
        0.0,
        0.0,
        1.70383925712239993810214054705E-1,
        1.07262030446373284651809199168E-1,
        -1.53194377486244017527936158236E-2,
        8.27378916381402288758473766002E-3,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        6.24110958716075717114429577812E-1,
        0.0,
        0.0,
        -3.36089262944694129406857109825E0,
        -8.68219346841726006818189891453E-1,
        2.75920996994467083049415600797E1,
        2.01540675504778934086186788979E1,
        -4.34898841810699588477366255144E1,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        4.77662536438264365890433908527E-1,
        0.0,
        0.0,
        -2.48811461997166764192642586468E0,
        -5.90290826836842996371446475743E-1,
        2.12300514481811942347288949897E1,
        1.52792336328824235832596922938E1,
        -3.32882109689848629194453265587E1,
        -2.03312017085086261358222928593E-2,
        0.0,
        0.0,
        0.0,
    ],
    [
        -9.3714243008598732571704021658E-1,
        0.0,
        0.0,
        5.18637242884406370830023853209E0,
        1.09143734899672957818500254654E0,
        -8.14978701074692612513997267357E0,
        -1.85200656599969598641566180701E1,
        2.27394870993505042818970056734E1,
        2.49360555267965238987089396762E0,
        -3.0467644718982195003823669022E0,
        0.0,
        0.0,
    ],
    [
        2.27331014751653820792359768449E0,
        0.0,
        0.0,
        -1.05344954667372501984066689879E1,
        -2.00087205822486249909675718444E0,
        -1.79589318631187989172765950534E1,
        2.79488845294199600508499808837E1,
        -2.85899827713502369474065508674E0,
        -8.87285693353062954433549289258E0,
        1.23605671757943030647266201528E1,
        6.43392746015763530355970484046E-1,
        0.0,
    ],
];

#[allow(clippy::excessive_precision)]
const B: [f64; 12] = [
    5.42937341165687622380535766363E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.45031289275240888144113950566E0,
    1.89151789931450038304281599044E0,
    -5.8012039600105847814672114227E0,
    3.1116436695781989440891606237E-1,
    -1.52160949662516078556178806805E-1,
    2.01365400804030348374776537501E-1,
    4.47106157277725905176885569043E-2,
];

// B - BHH is the third-order error weight; BHH lives on stages 1, 9 and 12.
#[allow(clippy::excessive_precision)]
const BHH: [f64; 12] = [
    0.244094488188976377952755905512E+00,
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    0.733846688281611857341361741547E+00,
    0.0,
    0.0,
    0.220588235294117647058823529412E-01,
];

#[allow(clippy::excessive_precision)]
const ER: [f64; 12] = [
    0.1312004499419488073250102996E-01,
    0.0,
    0.0,
    0.0,
    0.0,
    -0.1225156446376204440720569753E+01,
    -0.4957589496572501915214079952E+00,
    0.1664377182454986536961530415E+01,
    -0.3503288487499736816886487290E+00,
    0.3341791187130174790297318841E+00,
    0.8192320648511571246570742613E-01,
    -0.2235530786388629525884427845E-01,
];
