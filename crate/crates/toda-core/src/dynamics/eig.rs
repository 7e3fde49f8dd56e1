//! Eigenvalues of small real matrices.
//!
//! Householder reduction to upper Hessenberg form followed by the
//! Francis double-shift QR iteration, eigenvalues only — the classic
//! EISPACK/JAMA `orthes`/`hqr` pair. The matrices here are `2n x 2n`
//! with `n <= 6`, so no balancing pass is needed.

use alloc::vec;
use alloc::vec::Vec;

use crate::fp;

/// Eigenvalues of a dense row-major square matrix as `(re, im)` pairs.
pub fn eigenvalues(a: &[f64], dim: usize) -> Vec<(f64, f64)> {
    debug_assert_eq!(a.len(), dim * dim);
    let mut h = a.to_vec();
    orthes(&mut h, dim);
    hqr(&mut h, dim)
}

/// Householder reduction to Hessenberg form, in place, no transform
/// accumulation.
fn orthes(h: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let idx = |i: usize, j: usize| i * n + j;
    let low = 0;
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in low + 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += fp::abs(h[idx(i, m - 1)]);
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[idx(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = fp::sqrt(hh);
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        // apply the Householder reflector from both sides
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[idx(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[idx(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[idx(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[idx(i, j)] -= f * ort[j];
            }
        }
        h[idx(m, m - 1)] = scale * g;
    }
    // zero out the below-Hessenberg entries left by the reduction
    for i in 2..n {
        for j in 0..i - 1 {
            h[idx(i, j)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns the
/// eigenvalues. Mirrors the EISPACK `hqr` control flow.
fn hqr(h: &mut [f64], nn: usize) -> Vec<(f64, f64)> {
    let idx = |i: usize, j: usize| i * nn + j;
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    if nn == 0 {
        return Vec::new();
    }

    let low = 0usize;
    let high = nn - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    #[allow(unused_assignments)]
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut x, mut y, mut w): (f64, f64, f64);

    let mut norm = 0.0;
    for i in 0..nn {
        let jstart = i.saturating_sub(1);
        for j in jstart..nn {
            norm += fp::abs(h[idx(i, j)]);
        }
    }

    let mut n = high as isize;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low as isize {
        let ni = n as usize;
        // find a small subdiagonal element
        let mut l = ni;
        while l > low {
            s = fp::abs(h[idx(l - 1, l - 1)]) + fp::abs(h[idx(l, l)]);
            if s == 0.0 {
                s = norm;
            }
            if fp::abs(h[idx(l, l - 1)]) < eps * s {
                break;
            }
            l -= 1;
        }

        if l == ni {
            // one real root found
            h[idx(ni, ni)] += exshift;
            d[ni] = h[idx(ni, ni)];
            e[ni] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == ni - 1 {
            // a pair of roots found
            w = h[idx(ni, ni - 1)] * h[idx(ni - 1, ni)];
            p = (h[idx(ni - 1, ni - 1)] - h[idx(ni, ni)]) / 2.0;
            q = p * p + w;
            z = fp::sqrt(fp::abs(q));
            h[idx(ni, ni)] += exshift;
            h[idx(ni - 1, ni - 1)] += exshift;
            x = h[idx(ni, ni)];
            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[ni - 1] = x + z;
                d[ni] = if z != 0.0 { x - w / z } else { d[ni - 1] };
                e[ni - 1] = 0.0;
                e[ni] = 0.0;
            } else {
                // complex pair
                d[ni - 1] = x + p;
                d[ni] = x + p;
                e[ni - 1] = z;
                e[ni] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet: form a shift
            x = h[idx(ni, ni)];
            y = h[idx(ni - 1, ni - 1)];
            w = h[idx(ni, ni - 1)] * h[idx(ni - 1, ni)];

            if iter == 10 || iter == 20 {
                // exceptional shift
                exshift += x;
                for i in low..=ni {
                    h[idx(i, i)] -= x;
                }
                s = fp::abs(h[idx(ni, ni - 1)]) + fp::abs(h[idx(ni - 1, ni - 2)]);
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            total_iter += 1;
            debug_assert!(total_iter < 60 * nn, "QR iteration failed to converge");
            if total_iter >= 60 * nn {
                // give up gracefully; report the current diagonal
                for i in 0..=ni {
                    d[i] = h[idx(i, i)];
                    e[i] = 0.0;
                }
                break;
            }

            // two consecutive small subdiagonal elements
            let mut m = (ni - 2) as isize;
            while m >= l as isize {
                let mu = m as usize;
                z = h[idx(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[idx(mu + 1, mu)] + h[idx(mu, mu + 1)];
                q = h[idx(mu + 1, mu + 1)] - z - r - s;
                r = h[idx(mu + 2, mu + 1)];
                s = fp::abs(p) + fp::abs(q) + fp::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if mu == l {
                    break;
                }
                if fp::abs(h[idx(mu, mu - 1)]) * (fp::abs(q) + fp::abs(r))
                    < eps
                        * (fp::abs(p)
                            * (fp::abs(h[idx(mu - 1, mu - 1)])
                                + fp::abs(z)
                                + fp::abs(h[idx(mu + 1, mu + 1)])))
                {
                    break;
                }
                m -= 1;
            }
            let m = m as usize;

            for i in m + 2..=ni {
                h[idx(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[idx(i, i - 3)] = 0.0;
                }
            }

            // double QR sweep on rows l..=n
            for k in m..ni {
                let notlast = k != ni - 1;
                if k != m {
                    p = h[idx(k, k - 1)];
                    q = h[idx(k + 1, k - 1)];
                    r = if notlast { h[idx(k + 2, k - 1)] } else { 0.0 };
                    x = fp::abs(p) + fp::abs(q) + fp::abs(r);
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = fp::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[idx(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[idx(k, k - 1)] = -h[idx(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    // row modification
                    for j in k..=ni {
                        let mut pp = h[idx(k, j)] + q * h[idx(k + 1, j)];
                        if notlast {
                            pp += r * h[idx(k + 2, j)];
                            h[idx(k + 2, j)] -= pp * z;
                        }
                        h[idx(k, j)] -= pp * x;
                        h[idx(k + 1, j)] -= pp * y;
                    }

                    // column modification
                    let upper = if ni < k + 3 { ni } else { k + 3 };
                    for i in l..=upper {
                        let mut pp = x * h[idx(i, k)] + y * h[idx(i, k + 1)];
                        if notlast {
                            pp += z * h[idx(i, k + 2)];
                            h[idx(i, k + 2)] -= pp * r;
                        }
                        h[idx(i, k)] -= pp;
                        h[idx(i, k + 1)] -= pp * q;
                    }
                }
            }
        }
    }

    d.into_iter().zip(e).collect()
}
