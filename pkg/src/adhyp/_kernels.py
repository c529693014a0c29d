"""Compiled scalar kernels for reconstruction, fluxes, and sweep loops.

Everything here is shared between the per-interface module surfaces and the
fused right-hand-side sweeps, so there is exactly one implementation of the
interface math.  The 2-D expressions are written so that terms carrying the
transverse velocity vanish by adding exact zeros; a y-invariant 2-D field
therefore reproduces the 1-D results bit for bit.

Sweeps fill caller-provided per-cell velocity/pressure scratch in a prologue
pass so each interface only derives what is frame-specific; the driver reuses
the same arrays for stage validity scans.
"""

import numpy as np
from numba import njit

# Slope ratios with a backward difference below this relative threshold are
# treated as flat (the ratio would be 0/0 or +/-inf on round-off noise).
SLOPE_NOISE_FLOOR = 1e-14

# Central-upwind speed fan below this relative width falls back to the
# arithmetic flux average.
SPEED_DEGENERACY = 1e-10


@njit(cache=True, inline="always", error_model="numpy")
def phi_sbm_scalar(r, theta, tau):
    # r > 1 uses the closed form of the mirror relation r*phi(1/r); this is
    # algebraically identical and avoids the 1/r rounding of the literal
    # recursion.
    if r <= 0.0:
        return 0.0
    if r <= 1.0:
        a = r * theta
        b = 1.0 + tau * (r - 1.0)
        return a if a < b else b
    b = 1.0 + (1.0 - tau) * (r - 1.0)
    return theta if theta < b else b


@njit(cache=True, inline="always", error_model="numpy")
def slope_scalar(gm, g0, gp, dx, theta, tau):
    db = g0 - gm
    df = gp - g0
    scale = abs(gm)
    a0 = abs(g0)
    if a0 > scale:
        scale = a0
    ap = abs(gp)
    if ap > scale:
        scale = ap
    if scale < 1.0:
        scale = 1.0
    if abs(db) < SLOPE_NOISE_FLOOR * scale:
        return 0.0
    return phi_sbm_scalar(df / db, theta, tau) * db / dx


# --- characteristic projections (closed-form eigensystem) -------------------
#
# q1 = (gamma-1)/c^2, q2 = 0.5*|vel|^2*q1, ic = 1/c; hh is total enthalpy and
# ek the kinetic-energy entry of the entropy eigenvector.


@njit(cache=True, inline="always", error_model="numpy")
def char_from_cons_1d(q1, q2, uh, ic, r, m, e):
    g0 = 0.5 * ((q2 + uh * ic) * r + (-q1 * uh - ic) * m + q1 * e)
    g1 = (1.0 - q2) * r + q1 * uh * m - q1 * e
    g2 = 0.5 * ((q2 - uh * ic) * r + (-q1 * uh + ic) * m + q1 * e)
    return g0, g1, g2


@njit(cache=True, inline="always", error_model="numpy")
def cons_from_char_1d(uh, c, hh, ek, g0, g1, g2):
    r = g0 + g1 + g2
    m = g0 * (uh - c) + g1 * uh + g2 * (uh + c)
    e = g0 * (hh - uh * c) + g1 * ek + g2 * (hh + uh * c)
    return r, m, e


@njit(cache=True, inline="always", error_model="numpy")
def char_from_cons_x(q1, q2, uh, vh, ic, r, mx, my, e):
    g0 = 0.5 * ((q2 + uh * ic) * r + (-q1 * uh - ic) * mx + (-q1 * vh) * my + q1 * e)
    g1 = (1.0 - q2) * r + q1 * uh * mx + q1 * vh * my - q1 * e
    gs = -vh * r + my
    g3 = 0.5 * ((q2 - uh * ic) * r + (-q1 * uh + ic) * mx + (-q1 * vh) * my + q1 * e)
    return g0, g1, gs, g3


@njit(cache=True, inline="always", error_model="numpy")
def cons_from_char_x(uh, vh, c, hh, ek, g0, g1, gs, g3):
    r = g0 + g1 + g3
    mx = g0 * (uh - c) + g1 * uh + g3 * (uh + c)
    my = g0 * vh + g1 * vh + gs + g3 * vh
    e = g0 * (hh - uh * c) + g1 * ek + gs * vh + g3 * (hh + uh * c)
    return r, mx, my, e


@njit(cache=True, inline="always", error_model="numpy")
def char_from_cons_y(q1, q2, uh, vh, ic, r, mx, my, e):
    g0 = 0.5 * ((q2 + vh * ic) * r + (-q1 * uh) * mx + (-q1 * vh - ic) * my + q1 * e)
    g1 = (1.0 - q2) * r + q1 * uh * mx + q1 * vh * my - q1 * e
    gs = -uh * r + mx
    g3 = 0.5 * ((q2 - vh * ic) * r + (-q1 * uh) * mx + (-q1 * vh + ic) * my + q1 * e)
    return g0, g1, gs, g3


@njit(cache=True, inline="always", error_model="numpy")
def cons_from_char_y(uh, vh, c, hh, ek, g0, g1, gs, g3):
    r = g0 + g1 + g3
    mx = g0 * uh + g1 * uh + gs + g3 * uh
    my = g0 * (vh - c) + g1 * vh + g3 * (vh + c)
    e = g0 * (hh - vh * c) + g1 * ek + gs * uh + g3 * (hh + vh * c)
    return r, mx, my, e


@njit(cache=True, inline="always", error_model="numpy")
def pressure_1d(gm1, r, m, e):
    return gm1 * (e - 0.5 * (m * m) / r)


@njit(cache=True, inline="always", error_model="numpy")
def pressure_2d(gm1, r, mx, my, e):
    return gm1 * (e - 0.5 * (mx * mx + my * my) / r)


# --- one-sided interface values ---------------------------------------------
#
# A cell's one-sided value comes from its limited slope in the interface
# frame.  The in-cell linear profile must stay admissible (rho, p positive
# with a tiny relative margin) at BOTH endpoints, or the flux can defeat
# positivity of the cell averages; inadmissible profiles are rescaled to
# the largest admissible fraction of the slope, and only if that fails does
# the graded emergency chain (dissipative slopes, then the flat cell
# average) engage.

ADMISSIBLE_MARGIN = 1e-10
_THETA_BISECTIONS = 40


@njit(cache=True, error_model="numpy")
def _face_rescue_1d(uh, c, hh, ek, gm1, dx, theta, sign,
                    am, a0, ap, bm, b0, bp, cm, c0, cp,
                    sa, sb, sc, rmin, pmin,
                    r_avg, m_avg, e_avg, u_avg, p_avg):
    """Cold path: rescale the slope to the largest admissible fraction,
    then fall back to dissipative slopes and finally the flat average."""
    half = 0.5 * dx
    lo = 0.0
    hi = 1.0
    for _ in range(_THETA_BISECTIONS):
        mid = 0.5 * (lo + hi)
        ta = mid * sa
        tb = mid * sb
        tc = mid * sc
        fr, fm, fe = cons_from_char_1d(uh, c, hh, ek,
                                       a0 + sign * half * ta,
                                       b0 + sign * half * tb,
                                       c0 + sign * half * tc)
        fp = pressure_1d(gm1, fr, fm, fe)
        orr, om, oe = cons_from_char_1d(uh, c, hh, ek,
                                        a0 - sign * half * ta,
                                        b0 - sign * half * tb,
                                        c0 - sign * half * tc)
        op = pressure_1d(gm1, orr, om, oe)
        if fr > rmin and fp > pmin and orr > rmin and op > pmin:
            lo = mid
        else:
            hi = mid
    ta = lo * sa
    tb = lo * sb
    tc = lo * sc
    fr, fm, fe = cons_from_char_1d(uh, c, hh, ek,
                                   a0 + sign * half * ta,
                                   b0 + sign * half * tb,
                                   c0 + sign * half * tc)
    fp = pressure_1d(gm1, fr, fm, fe)
    orr, om, oe = cons_from_char_1d(uh, c, hh, ek,
                                    a0 - sign * half * ta,
                                    b0 - sign * half * tb,
                                    c0 - sign * half * tc)
    op = pressure_1d(gm1, orr, om, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fm, fe, fm / fr, fp, 1, 0

    # emergency chain: dissipative slopes, then the flat cell average
    sa = slope_scalar(am, a0, ap, dx, theta, 0.5)
    sb = slope_scalar(bm, b0, bp, dx, theta, 0.5)
    sc = slope_scalar(cm, c0, cp, dx, theta, 0.5)
    fr, fm, fe = cons_from_char_1d(uh, c, hh, ek,
                                   a0 + sign * half * sa,
                                   b0 + sign * half * sb,
                                   c0 + sign * half * sc)
    fp = pressure_1d(gm1, fr, fm, fe)
    orr, om, oe = cons_from_char_1d(uh, c, hh, ek,
                                    a0 - sign * half * sa,
                                    b0 - sign * half * sb,
                                    c0 - sign * half * sc)
    op = pressure_1d(gm1, orr, om, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fm, fe, fm / fr, fp, 1, 1
    return r_avg, m_avg, e_avg, u_avg, p_avg, 1, 1


@njit(cache=True, error_model="numpy")
def face_1d(uh, c, hh, ek, gm1, dx, theta, tau_cell, sign,
            am, a0, ap, bm, b0, bp, cm, c0, cp,
            r_avg, m_avg, e_avg, u_avg, p_avg):
    """One-sided value of the owning cell (sign=+1: right face, -1: left).

    Stencil triples (prev, center, next) are the cell's characteristic
    neighborhood in the interface frame.  Returns
    (r, m, e, u, p, limited, fallback).
    """
    half = 0.5 * dx
    rmin = ADMISSIBLE_MARGIN * r_avg
    pmin = ADMISSIBLE_MARGIN * p_avg

    sa = slope_scalar(am, a0, ap, dx, theta, tau_cell)
    sb = slope_scalar(bm, b0, bp, dx, theta, tau_cell)
    sc = slope_scalar(cm, c0, cp, dx, theta, tau_cell)
    fr, fm, fe = cons_from_char_1d(uh, c, hh, ek,
                                   a0 + sign * half * sa,
                                   b0 + sign * half * sb,
                                   c0 + sign * half * sc)
    fp = pressure_1d(gm1, fr, fm, fe)
    # the opposite endpoint of the linear profile is the mirror of the face
    # through the cell average (exact up to frame round-trip noise)
    orr = 2.0 * r_avg - fr
    om = 2.0 * m_avg - fm
    oe = 2.0 * e_avg - fe
    # p(mirror) > pmin  <=>  gm1*(oe*orr - om^2/2) > pmin*orr, given orr > 0
    if (fr > rmin and fp > pmin and orr > rmin
            and gm1 * (oe * orr - 0.5 * (om * om)) > pmin * orr):
        return fr, fm, fe, fm / fr, fp, 0, 0
    return _face_rescue_1d(uh, c, hh, ek, gm1, dx, theta, sign,
                           am, a0, ap, bm, b0, bp, cm, c0, cp,
                           sa, sb, sc, rmin, pmin,
                           r_avg, m_avg, e_avg, u_avg, p_avg)


@njit(cache=True, error_model="numpy")
def iface_states_1d(u, vel, pres, tau, fb_mask, lim_mask, jl, dx, gamma, theta,
                    first_order):
    """Reconstructed states at the interface between cells jl and jl+1.

    Returns (rl, ml, el, ul, pl, rr, mr, er, ur, pr, fallbacks).
    Needs cells jl-1 .. jl+2; `vel`/`pres` hold per-cell primitives.
    """
    jr = jl + 1
    gm1 = gamma - 1.0
    r0 = u[jl, 0]
    m0 = u[jl, 1]
    e0 = u[jl, 2]
    r1 = u[jr, 0]
    m1 = u[jr, 1]
    e1 = u[jr, 2]
    u0 = vel[jl]
    p0 = pres[jl]
    u1 = vel[jr]
    p1 = pres[jr]
    if first_order:
        return r0, m0, e0, u0, p0, r1, m1, e1, u1, p1, 0

    rm = u[jl - 1, 0]
    mm = u[jl - 1, 1]
    em = u[jl - 1, 2]
    r2 = u[jr + 1, 0]
    m2 = u[jr + 1, 1]
    e2 = u[jr + 1, 2]

    rh = 0.5 * (r0 + r1)
    uh = 0.5 * (u0 + u1)
    ph = 0.5 * (p0 + p1)
    irh = 1.0 / rh
    c = np.sqrt(gamma * ph * irh)
    eh = ph / gm1 + 0.5 * rh * (uh * uh)
    hh = (eh + ph) * irh
    ic = 1.0 / c
    q1 = gm1 * (ic * ic)
    q2 = 0.5 * (uh * uh) * q1
    ek = 0.5 * (uh * uh)

    am, bm, cm = char_from_cons_1d(q1, q2, uh, ic, rm, mm, em)
    a0, b0, c0 = char_from_cons_1d(q1, q2, uh, ic, r0, m0, e0)
    a1, b1, c1 = char_from_cons_1d(q1, q2, uh, ic, r1, m1, e1)
    a2, b2, c2 = char_from_cons_1d(q1, q2, uh, ic, r2, m2, e2)

    fb = 0
    rl, ml, el, ul, pl, liml, fbl = face_1d(
        uh, c, hh, ek, gm1, dx, theta, tau[jl], 1.0,
        am, a0, a1, bm, b0, b1, cm, c0, c1,
        r0, m0, e0, u0, p0,
    )
    if liml == 1:
        lim_mask[jl] = 1
    if fbl == 1:
        fb_mask[jl] = 1
        fb += 1
    rr, mr, er, ur, pr, limr, fbr = face_1d(
        uh, c, hh, ek, gm1, dx, theta, tau[jr], -1.0,
        a0, a1, a2, b0, b1, b2, c0, c1, c2,
        r1, m1, e1, u1, p1,
    )
    if limr == 1:
        lim_mask[jr] = 1
    if fbr == 1:
        fb_mask[jr] = 1
        fb += 1

    return rl, ml, el, ul, pl, rr, mr, er, ur, pr, fb


@njit(cache=True, error_model="numpy")
def _face_rescue_2d_x(uh, vh, c, hh, ek, gm1, dx, theta, sign,
                      am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
                      sa, sb, ss, sc, rmin, pmin,
                      r_avg, mx_avg, my_avg, e_avg, u_avg, p_avg):
    half = 0.5 * dx
    lo = 0.0
    hi = 1.0
    for _ in range(_THETA_BISECTIONS):
        mid = 0.5 * (lo + hi)
        ta = mid * sa
        tb = mid * sb
        ts = mid * ss
        tc = mid * sc
        fr, fmx, fmy, fe = cons_from_char_x(uh, vh, c, hh, ek,
                                            a0 + sign * half * ta,
                                            b0 + sign * half * tb,
                                            s0 + sign * half * ts,
                                            c0 + sign * half * tc)
        fp = pressure_2d(gm1, fr, fmx, fmy, fe)
        orr, omx, omy, oe = cons_from_char_x(uh, vh, c, hh, ek,
                                             a0 - sign * half * ta,
                                             b0 - sign * half * tb,
                                             s0 - sign * half * ts,
                                             c0 - sign * half * tc)
        op = pressure_2d(gm1, orr, omx, omy, oe)
        if fr > rmin and fp > pmin and orr > rmin and op > pmin:
            lo = mid
        else:
            hi = mid
    ta = lo * sa
    tb = lo * sb
    ts = lo * ss
    tc = lo * sc
    fr, fmx, fmy, fe = cons_from_char_x(uh, vh, c, hh, ek,
                                        a0 + sign * half * ta,
                                        b0 + sign * half * tb,
                                        s0 + sign * half * ts,
                                        c0 + sign * half * tc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr, omx, omy, oe = cons_from_char_x(uh, vh, c, hh, ek,
                                         a0 - sign * half * ta,
                                         b0 - sign * half * tb,
                                         s0 - sign * half * ts,
                                         c0 - sign * half * tc)
    op = pressure_2d(gm1, orr, omx, omy, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fmx, fmy, fe, fmx / fr, fp, 1, 0

    sa = slope_scalar(am, a0, ap, dx, theta, 0.5)
    sb = slope_scalar(bm, b0, bp, dx, theta, 0.5)
    ss = slope_scalar(sm, s0, sp, dx, theta, 0.5)
    sc = slope_scalar(cm, c0, cp, dx, theta, 0.5)
    fr, fmx, fmy, fe = cons_from_char_x(uh, vh, c, hh, ek,
                                        a0 + sign * half * sa,
                                        b0 + sign * half * sb,
                                        s0 + sign * half * ss,
                                        c0 + sign * half * sc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr, omx, omy, oe = cons_from_char_x(uh, vh, c, hh, ek,
                                         a0 - sign * half * sa,
                                         b0 - sign * half * sb,
                                         s0 - sign * half * ss,
                                         c0 - sign * half * sc)
    op = pressure_2d(gm1, orr, omx, omy, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fmx, fmy, fe, fmx / fr, fp, 1, 1
    return r_avg, mx_avg, my_avg, e_avg, u_avg, p_avg, 1, 1


@njit(cache=True, error_model="numpy")
def face_2d_x(uh, vh, c, hh, ek, gm1, dx, theta, tau_cell, sign,
              am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
              r_avg, mx_avg, my_avg, e_avg, u_avg, p_avg):
    half = 0.5 * dx
    rmin = ADMISSIBLE_MARGIN * r_avg
    pmin = ADMISSIBLE_MARGIN * p_avg

    sa = slope_scalar(am, a0, ap, dx, theta, tau_cell)
    sb = slope_scalar(bm, b0, bp, dx, theta, tau_cell)
    ss = slope_scalar(sm, s0, sp, dx, theta, tau_cell)
    sc = slope_scalar(cm, c0, cp, dx, theta, tau_cell)
    fr, fmx, fmy, fe = cons_from_char_x(uh, vh, c, hh, ek,
                                        a0 + sign * half * sa,
                                        b0 + sign * half * sb,
                                        s0 + sign * half * ss,
                                        c0 + sign * half * sc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr = 2.0 * r_avg - fr
    omx = 2.0 * mx_avg - fmx
    omy = 2.0 * my_avg - fmy
    oe = 2.0 * e_avg - fe
    # p(mirror) > pmin  <=>  gm1*(oe*orr - |om|^2/2) > pmin*orr, given orr > 0
    if (fr > rmin and fp > pmin and orr > rmin
            and gm1 * (oe * orr - 0.5 * (omx * omx + omy * omy)) > pmin * orr):
        return fr, fmx, fmy, fe, fmx / fr, fp, 0, 0
    return _face_rescue_2d_x(uh, vh, c, hh, ek, gm1, dx, theta, sign,
                             am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
                             sa, sb, ss, sc, rmin, pmin,
                             r_avg, mx_avg, my_avg, e_avg, u_avg, p_avg)


@njit(cache=True, error_model="numpy")
def iface_states_x(u, velx, vely, pres, tau, fb_mask, lim_mask, k, jl, dx,
                   gamma, theta, first_order):
    """Interface between cells (k, jl) and (k, jl+1); k, jl are array indices.

    Returns (rl, mxl, myl, el, ul, pl, rr, mxr, myr, er, ur, pr, fallbacks)
    with ul/ur the normal (x) velocities of the reconstructed states.
    """
    jr = jl + 1
    gm1 = gamma - 1.0
    r0 = u[k, jl, 0]
    mx0 = u[k, jl, 1]
    my0 = u[k, jl, 2]
    e0 = u[k, jl, 3]
    r1 = u[k, jr, 0]
    mx1 = u[k, jr, 1]
    my1 = u[k, jr, 2]
    e1 = u[k, jr, 3]
    u0 = velx[k, jl]
    p0 = pres[k, jl]
    u1 = velx[k, jr]
    p1 = pres[k, jr]
    if first_order:
        return r0, mx0, my0, e0, u0, p0, r1, mx1, my1, e1, u1, p1, 0

    v0 = vely[k, jl]
    v1 = vely[k, jr]
    rm = u[k, jl - 1, 0]
    mxm = u[k, jl - 1, 1]
    mym = u[k, jl - 1, 2]
    em = u[k, jl - 1, 3]
    r2 = u[k, jr + 1, 0]
    mx2 = u[k, jr + 1, 1]
    my2 = u[k, jr + 1, 2]
    e2 = u[k, jr + 1, 3]

    rh = 0.5 * (r0 + r1)
    uh = 0.5 * (u0 + u1)
    vh = 0.5 * (v0 + v1)
    ph = 0.5 * (p0 + p1)
    irh = 1.0 / rh
    c = np.sqrt(gamma * ph * irh)
    eh = ph / gm1 + 0.5 * rh * (uh * uh + vh * vh)
    hh = (eh + ph) * irh
    ic = 1.0 / c
    q1 = gm1 * (ic * ic)
    q2 = 0.5 * (uh * uh + vh * vh) * q1
    ek = 0.5 * (uh * uh + vh * vh)

    am, bm, sm, cm = char_from_cons_x(q1, q2, uh, vh, ic, rm, mxm, mym, em)
    a0, b0, s0, c0 = char_from_cons_x(q1, q2, uh, vh, ic, r0, mx0, my0, e0)
    a1, b1, s1, c1 = char_from_cons_x(q1, q2, uh, vh, ic, r1, mx1, my1, e1)
    a2, b2, s2, c2 = char_from_cons_x(q1, q2, uh, vh, ic, r2, mx2, my2, e2)

    fb = 0
    rl, mxl, myl, el, ul, pl, liml, fbl = face_2d_x(
        uh, vh, c, hh, ek, gm1, dx, theta, tau[k, jl], 1.0,
        am, a0, a1, bm, b0, b1, sm, s0, s1, cm, c0, c1,
        r0, mx0, my0, e0, u0, p0,
    )
    if liml == 1:
        lim_mask[k, jl] = 1
    if fbl == 1:
        fb_mask[k, jl] = 1
        fb += 1
    rr, mxr, myr, er, ur, pr, limr, fbr = face_2d_x(
        uh, vh, c, hh, ek, gm1, dx, theta, tau[k, jr], -1.0,
        a0, a1, a2, b0, b1, b2, s0, s1, s2, c0, c1, c2,
        r1, mx1, my1, e1, u1, p1,
    )
    if limr == 1:
        lim_mask[k, jr] = 1
    if fbr == 1:
        fb_mask[k, jr] = 1
        fb += 1

    return rl, mxl, myl, el, ul, pl, rr, mxr, myr, er, ur, pr, fb


@njit(cache=True, error_model="numpy")
def _face_rescue_2d_y(uh, vh, c, hh, ek, gm1, dy, theta, sign,
                      am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
                      sa, sb, ss, sc, rmin, pmin,
                      r_avg, mx_avg, my_avg, e_avg, v_avg, p_avg):
    half = 0.5 * dy
    lo = 0.0
    hi = 1.0
    for _ in range(_THETA_BISECTIONS):
        mid = 0.5 * (lo + hi)
        ta = mid * sa
        tb = mid * sb
        ts = mid * ss
        tc = mid * sc
        fr, fmx, fmy, fe = cons_from_char_y(uh, vh, c, hh, ek,
                                            a0 + sign * half * ta,
                                            b0 + sign * half * tb,
                                            s0 + sign * half * ts,
                                            c0 + sign * half * tc)
        fp = pressure_2d(gm1, fr, fmx, fmy, fe)
        orr, omx, omy, oe = cons_from_char_y(uh, vh, c, hh, ek,
                                             a0 - sign * half * ta,
                                             b0 - sign * half * tb,
                                             s0 - sign * half * ts,
                                             c0 - sign * half * tc)
        op = pressure_2d(gm1, orr, omx, omy, oe)
        if fr > rmin and fp > pmin and orr > rmin and op > pmin:
            lo = mid
        else:
            hi = mid
    ta = lo * sa
    tb = lo * sb
    ts = lo * ss
    tc = lo * sc
    fr, fmx, fmy, fe = cons_from_char_y(uh, vh, c, hh, ek,
                                        a0 + sign * half * ta,
                                        b0 + sign * half * tb,
                                        s0 + sign * half * ts,
                                        c0 + sign * half * tc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr, omx, omy, oe = cons_from_char_y(uh, vh, c, hh, ek,
                                         a0 - sign * half * ta,
                                         b0 - sign * half * tb,
                                         s0 - sign * half * ts,
                                         c0 - sign * half * tc)
    op = pressure_2d(gm1, orr, omx, omy, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fmx, fmy, fe, fmy / fr, fp, 1, 0

    sa = slope_scalar(am, a0, ap, dy, theta, 0.5)
    sb = slope_scalar(bm, b0, bp, dy, theta, 0.5)
    ss = slope_scalar(sm, s0, sp, dy, theta, 0.5)
    sc = slope_scalar(cm, c0, cp, dy, theta, 0.5)
    fr, fmx, fmy, fe = cons_from_char_y(uh, vh, c, hh, ek,
                                        a0 + sign * half * sa,
                                        b0 + sign * half * sb,
                                        s0 + sign * half * ss,
                                        c0 + sign * half * sc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr, omx, omy, oe = cons_from_char_y(uh, vh, c, hh, ek,
                                         a0 - sign * half * sa,
                                         b0 - sign * half * sb,
                                         s0 - sign * half * ss,
                                         c0 - sign * half * sc)
    op = pressure_2d(gm1, orr, omx, omy, oe)
    if fr > rmin and fp > pmin and orr > rmin and op > pmin:
        return fr, fmx, fmy, fe, fmy / fr, fp, 1, 1
    return r_avg, mx_avg, my_avg, e_avg, v_avg, p_avg, 1, 1


@njit(cache=True, error_model="numpy")
def face_2d_y(uh, vh, c, hh, ek, gm1, dy, theta, tau_cell, sign,
              am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
              r_avg, mx_avg, my_avg, e_avg, v_avg, p_avg):
    half = 0.5 * dy
    rmin = ADMISSIBLE_MARGIN * r_avg
    pmin = ADMISSIBLE_MARGIN * p_avg

    sa = slope_scalar(am, a0, ap, dy, theta, tau_cell)
    sb = slope_scalar(bm, b0, bp, dy, theta, tau_cell)
    ss = slope_scalar(sm, s0, sp, dy, theta, tau_cell)
    sc = slope_scalar(cm, c0, cp, dy, theta, tau_cell)
    fr, fmx, fmy, fe = cons_from_char_y(uh, vh, c, hh, ek,
                                        a0 + sign * half * sa,
                                        b0 + sign * half * sb,
                                        s0 + sign * half * ss,
                                        c0 + sign * half * sc)
    fp = pressure_2d(gm1, fr, fmx, fmy, fe)
    orr = 2.0 * r_avg - fr
    omx = 2.0 * mx_avg - fmx
    omy = 2.0 * my_avg - fmy
    oe = 2.0 * e_avg - fe
    # p(mirror) > pmin  <=>  gm1*(oe*orr - |om|^2/2) > pmin*orr, given orr > 0
    if (fr > rmin and fp > pmin and orr > rmin
            and gm1 * (oe * orr - 0.5 * (omx * omx + omy * omy)) > pmin * orr):
        return fr, fmx, fmy, fe, fmy / fr, fp, 0, 0
    return _face_rescue_2d_y(uh, vh, c, hh, ek, gm1, dy, theta, sign,
                             am, a0, ap, bm, b0, bp, sm, s0, sp, cm, c0, cp,
                             sa, sb, ss, sc, rmin, pmin,
                             r_avg, mx_avg, my_avg, e_avg, v_avg, p_avg)


@njit(cache=True, error_model="numpy")
def iface_states_y(u, velx, vely, pres, tau, fb_mask, lim_mask, kl, j, dy,
                   gamma, theta, first_order):
    """Interface between cells (kl, j) and (kl+1, j); vl/vr are the normal
    (y) velocities of the reconstructed states."""
    kr = kl + 1
    gm1 = gamma - 1.0
    r0 = u[kl, j, 0]
    mx0 = u[kl, j, 1]
    my0 = u[kl, j, 2]
    e0 = u[kl, j, 3]
    r1 = u[kr, j, 0]
    mx1 = u[kr, j, 1]
    my1 = u[kr, j, 2]
    e1 = u[kr, j, 3]
    v0 = vely[kl, j]
    p0 = pres[kl, j]
    v1 = vely[kr, j]
    p1 = pres[kr, j]
    if first_order:
        return r0, mx0, my0, e0, v0, p0, r1, mx1, my1, e1, v1, p1, 0

    u0 = velx[kl, j]
    u1 = velx[kr, j]
    rm = u[kl - 1, j, 0]
    mxm = u[kl - 1, j, 1]
    mym = u[kl - 1, j, 2]
    em = u[kl - 1, j, 3]
    r2 = u[kr + 1, j, 0]
    mx2 = u[kr + 1, j, 1]
    my2 = u[kr + 1, j, 2]
    e2 = u[kr + 1, j, 3]

    rh = 0.5 * (r0 + r1)
    uh = 0.5 * (u0 + u1)
    vh = 0.5 * (v0 + v1)
    ph = 0.5 * (p0 + p1)
    irh = 1.0 / rh
    c = np.sqrt(gamma * ph * irh)
    eh = ph / gm1 + 0.5 * rh * (uh * uh + vh * vh)
    hh = (eh + ph) * irh
    ic = 1.0 / c
    q1 = gm1 * (ic * ic)
    q2 = 0.5 * (uh * uh + vh * vh) * q1
    ek = 0.5 * (uh * uh + vh * vh)

    am, bm, sm, cm = char_from_cons_y(q1, q2, uh, vh, ic, rm, mxm, mym, em)
    a0, b0, s0, c0 = char_from_cons_y(q1, q2, uh, vh, ic, r0, mx0, my0, e0)
    a1, b1, s1, c1 = char_from_cons_y(q1, q2, uh, vh, ic, r1, mx1, my1, e1)
    a2, b2, s2, c2 = char_from_cons_y(q1, q2, uh, vh, ic, r2, mx2, my2, e2)

    fb = 0
    rl, mxl, myl, el, vl, pl, liml, fbl = face_2d_y(
        uh, vh, c, hh, ek, gm1, dy, theta, tau[kl, j], 1.0,
        am, a0, a1, bm, b0, b1, sm, s0, s1, cm, c0, c1,
        r0, mx0, my0, e0, v0, p0,
    )
    if liml == 1:
        lim_mask[kl, j] = 1
    if fbl == 1:
        fb_mask[kl, j] = 1
        fb += 1
    rr, mxr, myr, er, vr, pr, limr, fbr = face_2d_y(
        uh, vh, c, hh, ek, gm1, dy, theta, tau[kr, j], -1.0,
        a0, a1, a2, b0, b1, b2, s0, s1, s2, c0, c1, c2,
        r1, mx1, my1, e1, v1, p1,
    )
    if limr == 1:
        lim_mask[kr, j] = 1
    if fbr == 1:
        fb_mask[kr, j] = 1
        fb += 1

    return rl, mxl, myl, el, vl, pl, rr, mxr, myr, er, vr, pr, fb


# --- central-upwind flux ------------------------------------------------------


@njit(cache=True, inline="always", error_model="numpy")
def cu_flux_1d(gamma, rl, ml, el, ul, pl, rr, mr, er, ur, pr):
    """Central-upwind flux and one-sided speeds for a 1-D x-interface."""
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    ap = max(ul + cl, ur + cr, 0.0)
    am = min(ul - cl, ur - cr, 0.0)

    fl0 = ml
    fl1 = ml * ul + pl
    fl2 = ul * (el + pl)
    fr0 = mr
    fr1 = mr * ur + pr
    fr2 = ur * (er + pr)

    d = ap - am
    lim = abs(ap)
    t = abs(am)
    if t > lim:
        lim = t
    if lim < 1.0:
        lim = 1.0
    if d > SPEED_DEGENERACY * lim:
        inv = 1.0 / d
        w = ap * am * inv
        h0 = (ap * fl0 - am * fr0) * inv + w * (rr - rl)
        h1 = (ap * fl1 - am * fr1) * inv + w * (mr - ml)
        h2 = (ap * fl2 - am * fr2) * inv + w * (er - el)
    else:
        h0 = 0.5 * (fl0 + fr0)
        h1 = 0.5 * (fl1 + fr1)
        h2 = 0.5 * (fl2 + fr2)
    return h0, h1, h2, ap, am


@njit(cache=True, inline="always", error_model="numpy")
def cu_flux_x(gamma, rl, mxl, myl, el, ul, pl, rr, mxr, myr, er, ur, pr):
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    ap = max(ul + cl, ur + cr, 0.0)
    am = min(ul - cl, ur - cr, 0.0)

    fl0 = mxl
    fl1 = mxl * ul + pl
    fl2 = myl * ul
    fl3 = ul * (el + pl)
    fr0 = mxr
    fr1 = mxr * ur + pr
    fr2 = myr * ur
    fr3 = ur * (er + pr)

    d = ap - am
    lim = abs(ap)
    t = abs(am)
    if t > lim:
        lim = t
    if lim < 1.0:
        lim = 1.0
    if d > SPEED_DEGENERACY * lim:
        inv = 1.0 / d
        w = ap * am * inv
        h0 = (ap * fl0 - am * fr0) * inv + w * (rr - rl)
        h1 = (ap * fl1 - am * fr1) * inv + w * (mxr - mxl)
        h2 = (ap * fl2 - am * fr2) * inv + w * (myr - myl)
        h3 = (ap * fl3 - am * fr3) * inv + w * (er - el)
    else:
        h0 = 0.5 * (fl0 + fr0)
        h1 = 0.5 * (fl1 + fr1)
        h2 = 0.5 * (fl2 + fr2)
        h3 = 0.5 * (fl3 + fr3)
    return h0, h1, h2, h3, ap, am


@njit(cache=True, inline="always", error_model="numpy")
def cu_flux_y(gamma, rl, mxl, myl, el, vl, pl, rr, mxr, myr, er, vr, pr):
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    ap = max(vl + cl, vr + cr, 0.0)
    am = min(vl - cl, vr - cr, 0.0)

    fl0 = myl
    fl1 = mxl * vl
    fl2 = myl * vl + pl
    fl3 = vl * (el + pl)
    fr0 = myr
    fr1 = mxr * vr
    fr2 = myr * vr + pr
    fr3 = vr * (er + pr)

    d = ap - am
    lim = abs(ap)
    t = abs(am)
    if t > lim:
        lim = t
    if lim < 1.0:
        lim = 1.0
    if d > SPEED_DEGENERACY * lim:
        inv = 1.0 / d
        w = ap * am * inv
        h0 = (ap * fl0 - am * fr0) * inv + w * (rr - rl)
        h1 = (ap * fl1 - am * fr1) * inv + w * (mxr - mxl)
        h2 = (ap * fl2 - am * fr2) * inv + w * (myr - myl)
        h3 = (ap * fl3 - am * fr3) * inv + w * (er - el)
    else:
        h0 = 0.5 * (fl0 + fr0)
        h1 = 0.5 * (fl1 + fr1)
        h2 = 0.5 * (fl2 + fr2)
        h3 = 0.5 * (fl3 + fr3)
    return h0, h1, h2, h3, ap, am


# --- fused sweeps ---------------------------------------------------------------


@njit(cache=True, error_model="numpy")
def rhs_sweep_1d(u, vel, pres, tau, fb_mask, lim_mask, g, nx, dx, gamma, theta,
                 first_order, flux, rhs):
    """Fill flux[(nx+1), 3] and rhs (full-shape, interior written); returns
    fallbacks.  `vel`/`pres` are output scratch filled with the per-cell
    primitives."""
    gm1 = gamma - 1.0
    for j in range(u.shape[0]):
        vel[j] = u[j, 1] / u[j, 0]
        pres[j] = gm1 * (u[j, 2] - 0.5 * (u[j, 1] * u[j, 1]) / u[j, 0])
    nfb = 0
    for i in range(nx + 1):
        jl = g + i - 1
        rl, ml, el, ul, pl, rr, mr, er, ur, pr, fb = iface_states_1d(
            u, vel, pres, tau, fb_mask, lim_mask, jl, dx, gamma, theta, first_order
        )
        nfb += fb
        h0, h1, h2, ap, am = cu_flux_1d(gamma, rl, ml, el, ul, pl, rr, mr, er, ur, pr)
        flux[i, 0] = h0
        flux[i, 1] = h1
        flux[i, 2] = h2
    for j in range(nx):
        c = g + j
        rhs[c, 0] = -(flux[j + 1, 0] - flux[j, 0]) / dx
        rhs[c, 1] = -(flux[j + 1, 1] - flux[j, 1]) / dx
        rhs[c, 2] = -(flux[j + 1, 2] - flux[j, 2]) / dx
    return nfb


@njit(cache=True, error_model="numpy")
def rhs_sweep_2d(u, velx, vely, pres, tau, fb_mask, lim_mask, g, nx, ny, dx, dy,
                 gamma, theta, first_order, source_id, fx, fy, rhs):
    """2-D flux-difference sweep; source_id 1 adds the gravity source
    (0, 0, rho, mom_y).  velx/vely/pres are output scratch for the per-cell
    primitives."""
    gm1 = gamma - 1.0
    for k in range(u.shape[0]):
        for j in range(u.shape[1]):
            velx[k, j] = u[k, j, 1] / u[k, j, 0]
            vely[k, j] = u[k, j, 2] / u[k, j, 0]
            pres[k, j] = gm1 * (
                u[k, j, 3] - 0.5 * (u[k, j, 1] * u[k, j, 1] + u[k, j, 2] * u[k, j, 2]) / u[k, j, 0]
            )
    nfb = 0
    for k in range(ny):
        row = g + k
        for i in range(nx + 1):
            jl = g + i - 1
            rl, mxl, myl, el, ul, pl, rr, mxr, myr, er, ur, pr, fb = iface_states_x(
                u, velx, vely, pres, tau, fb_mask, lim_mask, row, jl, dx, gamma,
                theta, first_order
            )
            nfb += fb
            h0, h1, h2, h3, ap, am = cu_flux_x(
                gamma, rl, mxl, myl, el, ul, pl, rr, mxr, myr, er, ur, pr
            )
            fx[k, i, 0] = h0
            fx[k, i, 1] = h1
            fx[k, i, 2] = h2
            fx[k, i, 3] = h3
    for i in range(ny + 1):
        kl = g + i - 1
        for j in range(nx):
            col = g + j
            rl, mxl, myl, el, vl, pl, rr, mxr, myr, er, vr, pr, fb = iface_states_y(
                u, velx, vely, pres, tau, fb_mask, lim_mask, kl, col, dy, gamma,
                theta, first_order
            )
            nfb += fb
            h0, h1, h2, h3, ap, am = cu_flux_y(
                gamma, rl, mxl, myl, el, vl, pl, rr, mxr, myr, er, vr, pr
            )
            fy[i, j, 0] = h0
            fy[i, j, 1] = h1
            fy[i, j, 2] = h2
            fy[i, j, 3] = h3
    for k in range(ny):
        row = g + k
        for j in range(nx):
            col = g + j
            for comp in range(4):
                rhs[row, col, comp] = (
                    -(fx[k, j + 1, comp] - fx[k, j, comp]) / dx
                    - (fy[k + 1, j, comp] - fy[k, j, comp]) / dy
                )
            if source_id == 1:
                rhs[row, col, 2] += u[row, col, 0]
                rhs[row, col, 3] += u[row, col, 2]
    return nfb


# --- CFL signal speeds (from cell averages, over all interior-touching interfaces)


@njit(cache=True, error_model="numpy")
def max_speed_1d(vel, pres, rho, g, nx, gamma):
    s = 0.0
    for i in range(nx + 1):
        jl = g + i - 1
        jr = jl + 1
        cl = np.sqrt(gamma * pres[jl] / rho[jl])
        cr = np.sqrt(gamma * pres[jr] / rho[jr])
        ap = max(vel[jl] + cl, vel[jr] + cr, 0.0)
        am = min(vel[jl] - cl, vel[jr] - cr, 0.0)
        m = max(ap, -am)
        s = max(s, m)
    return s


@njit(cache=True, error_model="numpy")
def max_speed_2d(velx, vely, pres, rho, g, nx, ny, gamma):
    """Returns (sx, sy) over x- and y-interface fans built from cell averages."""
    sx = 0.0
    for k in range(ny):
        row = g + k
        for i in range(nx + 1):
            jl = g + i - 1
            jr = jl + 1
            cl = np.sqrt(gamma * pres[row, jl] / rho[row, jl])
            cr = np.sqrt(gamma * pres[row, jr] / rho[row, jr])
            ap = max(velx[row, jl] + cl, velx[row, jr] + cr, 0.0)
            am = min(velx[row, jl] - cl, velx[row, jr] - cr, 0.0)
            sx = max(sx, max(ap, -am))
    sy = 0.0
    for i in range(ny + 1):
        kl = g + i - 1
        kr = kl + 1
        for j in range(nx):
            col = g + j
            cl = np.sqrt(gamma * pres[kl, col] / rho[kl, col])
            cr = np.sqrt(gamma * pres[kr, col] / rho[kr, col])
            ap = max(vely[kl, col] + cl, vely[kr, col] + cr, 0.0)
            am = min(vely[kl, col] - cl, vely[kr, col] - cr, 0.0)
            sy = max(sy, max(ap, -am))
    return sx, sy


# --- state validity scans ---------------------------------------------------------


@njit(cache=True, error_model="numpy")
def first_invalid_1d(rho, pres, g, nx):
    """Index of the first invalid interior cell (rho or p not positive and
    finite), or -1 when all are admissible."""
    for j in range(nx):
        r = rho[g + j]
        p = pres[g + j]
        if not (r > 0.0 and p > 0.0 and np.isfinite(r) and np.isfinite(p)):
            return j
    return -1


@njit(cache=True, error_model="numpy")
def first_invalid_2d(rho, pres, g, nx, ny):
    """Flattened interior index of the first invalid cell, or -1."""
    for k in range(ny):
        for j in range(nx):
            r = rho[g + k, g + j]
            p = pres[g + k, g + j]
            if not (r > 0.0 and p > 0.0 and np.isfinite(r) and np.isfinite(p)):
                return k * nx + j
    return -1


@njit(cache=True, error_model="numpy")
def fill_prims_1d(u, vel, pres, gamma):
    gm1 = gamma - 1.0
    for j in range(u.shape[0]):
        vel[j] = u[j, 1] / u[j, 0]
        pres[j] = gm1 * (u[j, 2] - 0.5 * (u[j, 1] * u[j, 1]) / u[j, 0])


@njit(cache=True, error_model="numpy")
def fill_prims_2d(u, velx, vely, pres, gamma):
    gm1 = gamma - 1.0
    for k in range(u.shape[0]):
        for j in range(u.shape[1]):
            velx[k, j] = u[k, j, 1] / u[k, j, 0]
            vely[k, j] = u[k, j, 2] / u[k, j, 0]
            pres[k, j] = gm1 * (
                u[k, j, 3] - 0.5 * (u[k, j, 1] * u[k, j, 1] + u[k, j, 2] * u[k, j, 2]) / u[k, j, 0]
            )


# --- fused time-step combinations (single memory pass each) ---------------------


@njit(cache=True, error_model="numpy")
def combine_fma(k, a, add):
    """k <- k*a + add, elementwise on flat views."""
    for i in range(k.size):
        k[i] = k[i] * a + add[i]


@njit(cache=True, error_model="numpy")
def combine_weighted(k, a, b, other):
    """k <- k*a + b*other, elementwise on flat views."""
    for i in range(k.size):
        k[i] = k[i] * a + b * other[i]


@njit(cache=True, error_model="numpy")
def combine_third(k, a, other):
    """k <- k*a + other/3, elementwise on flat views."""
    for i in range(k.size):
        k[i] = k[i] * a + other[i] / 3.0
