"""Compiled numerical kernels.

Everything order-dependent or called per cell lives here as numba jit
functions: the scalar Newton solve, Gauss-Seidel sweeps of the implicit
schemes in 1D and 2D, interface reconstructions, and the WENO weight and
limiter computation. Array layout convention: 1D fields have length
M + 2*ghost with the interior on [g, g+M); edge arrays have one more entry,
edge e sitting between cells e-1 and e. In 2D the first index is x and the
second is y.

The sorption function is extended to negative arguments by odd reflection,
F(u) = u + a*sign(u)*|u|**p, so that transient Newton iterates and mild
undershoots of the unlimited schemes cannot leave the real domain for
fractional p. Converged solutions of the monotone schemes stay nonnegative.
"""

from __future__ import annotations

import numpy as np
from numba import njit


# ---------------------------------------------------------------------------
# scalar building blocks


@njit(cache=True)
def freundlich_F(a, p, u):
    """F(u) = u + a*u**p, odd-extended to u < 0."""
    if u >= 0.0:
        return u + a * u ** p
    return u - a * (-u) ** p


@njit(cache=True)
def freundlich_dF(a, p, u, reg_floor):
    """Regularized derivative F'(u) = 1 + p*a*max(|u|, reg_floor)**(p-1)."""
    au = abs(u)
    if au < reg_floor:
        au = reg_floor
    return 1.0 + p * a * au ** (p - 1.0)


@njit(cache=True)
def solve_cell(a, p, gamma, R, u0, abs_tol, max_iter, reg_floor):
    """Solve F(X) + gamma*X = R for the unique root X.

    G(X) = F(X) + gamma*X - R is strictly increasing (gamma >= 0) and odd
    apart from the constant, so the sign of the root is the sign of R and
    the problem reduces to a positive root in [0, |R|]. Newton runs on the
    doubly logarithmic form ln((1+gamma)X + a*X^p) = ln|R|: the left side is
    convex in ln X (log-sum-exp of two affine terms) and asymptotically
    affine with slope p or 1, so the projected iteration is globally
    convergent and crosses the many decades between q and (q/a)^(1/p) that
    p far from 1 opens up in a handful of steps. Plain Newton with the
    reg_floor slope stalls whenever the root lies below the floor; the floor
    enters only for the first step off X = 0, where the true slope is
    singular for p < 1. Steps leaving the bracket fall back to its
    (geometric) midpoint. After the residual first drops below abs_tol one
    more update is applied, which makes the returned root insensitive to the
    starting guess well below abs_tol.

    Returns (x, iterations, converged).
    """
    sgn = 1.0
    if R < 0.0:
        sgn = -1.0
    Ra = abs(R)
    lo = 0.0
    hi = Ra
    x = sgn * u0
    if x < lo:
        x = lo
    elif x > hi:
        x = hi
    it = 0
    while it < max_iter:
        w = a * x ** p
        lin = x + gamma * x
        g = lin + w - Ra
        it += 1
        done = abs(g) <= abs_tol
        if x == 0.0:
            # slope at the origin is singular for p < 1; one floored step
            xn = -g / (1.0 + p * a * reg_floor ** (p - 1.0) + gamma)
            if done:
                return 0.0, it, True
        else:
            # Newton for phi(s) = ln(lin + w) - ln(Ra) in s = ln x,
            # phi'(s) = (lin + p*w) / (lin + w)
            t = np.log((lin + w) / Ra) * (lin + w) / (lin + p * w)
            xn = x * np.exp(-t)
            if done:
                if xn < lo or xn > hi:
                    return sgn * x, it, True
                return sgn * xn, it, True
        if g > 0.0:
            hi = x
        else:
            lo = x
        if hi - lo <= 1e-15 * hi:
            # the bracket has collapsed to rounding precision; abs_tol is
            # not representable in the residual at this magnitude of R
            if xn < lo or xn > hi:
                xn = 0.5 * (lo + hi)
            return sgn * xn, it, True
        if not (lo < xn < hi):
            if lo == 0.0:
                xn = 0.5 * (lo + hi)
            else:
                xn = np.sqrt(lo) * np.sqrt(hi)
        x = xn
    return sgn * x, it, False


@njit(cache=True)
def invert_range(u, q, a, p, i0, i1, abs_tol, max_iter, reg_floor):
    """Invert q into u on the index range [i0, i1), warm-started from u.

    Returns (newton_iterations, all_converged).
    """
    total = 0
    ok = True
    for i in range(i0, i1):
        x, it, conv = solve_cell(a, p, 0.0, q[i], u[i], abs_tol, max_iter, reg_floor)
        u[i] = x
        total += it
        ok = ok and conv
    return total, ok


@njit(cache=True)
def invert_rect(u, q, a, p, i0, i1, j0, j1, abs_tol, max_iter, reg_floor):
    """2D version of invert_range over the index rectangle [i0,i1) x [j0,j1)."""
    total = 0
    ok = True
    for i in range(i0, i1):
        for j in range(j0, j1):
            x, it, conv = solve_cell(a, p, 0.0, q[i, j], u[i, j],
                                     abs_tol, max_iter, reg_floor)
            u[i, j] = x
            total += it
            ok = ok and conv
    return total, ok


@njit(cache=True)
def F_array(u, a, p):
    """Elementwise odd-extended F over a 1D array."""
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        out[i] = freundlich_F(a, p, u[i])
    return out


# ---------------------------------------------------------------------------
# 1D sweeps

# Cell equation of the first order implicit upwind scheme, cell i:
#   F(X) + (tau/h)*(vp[i+1] - vm[i])*X
#       = qold[i] + (tau/h)*(vp[i]*unew[i-1] - vm[i+1]*unew[i+1])
# where vp/vm are the positive/negative parts of the edge velocities.


@njit(cache=True)
def sweep_first_1d(unew, uold, qold, vp, vm, rh, a, p, i0, i1, step,
                   abs_tol, max_iter, reg_floor):
    """One Gauss-Seidel sweep of the first order implicit scheme.

    Visits cells i0, i0+step, ... up to (excluding) i1 and solves the scalar
    cell equation in place. Returns (max_update, newton_iters, converged).
    """
    dmax = 0.0
    total = 0
    ok = True
    i = i0
    while i != i1:
        gamma = rh * (vp[i + 1] - vm[i])
        R = qold[i] + rh * (vp[i] * unew[i - 1] - vm[i + 1] * unew[i + 1])
        x, it, conv = solve_cell(a, p, gamma, R, unew[i], abs_tol, max_iter, reg_floor)
        d = abs(x - unew[i])
        if d > dmax:
            dmax = d
        unew[i] = x
        total += it
        ok = ok and conv
        i += step
    return dmax, total, ok


# Interface values of the blended second order scheme (positive branch,
# edge i+1/2 owned by upwind cell i):
#   U_{i+1/2} = X - (l/2) * ( om*(unew[i-1] - uold[i]) + (1-om)*(X - uold[i+1]) )
# which is affine in the unknown X = unew[i]:
#   U_{i+1/2} = (1 - cp)*X - ap,
#   cp = (l/2)*(1-om),  ap = (l/2)*( om*(unew[i-1]-uold[i]) - (1-om)*uold[i+1] ).
# The negative branch at edge i-1/2 is the mirrored formula. With l = 0 every
# expression collapses bitwise to the first order scheme above.


@njit(cache=True)
def sweep_limited_1d(unew, uold, qold, vp, vm, rh, a, p,
                     om_p, om_m, l_p, l_m, i0, i1, step,
                     abs_tol, max_iter, reg_floor):
    """One Gauss-Seidel sweep of the limited compact implicit scheme."""
    dmax = 0.0
    total = 0
    ok = True
    i = i0
    while i != i1:
        cp = 0.5 * l_p[i] * (1.0 - om_p[i])
        ap = 0.5 * l_p[i] * (om_p[i] * (unew[i - 1] - uold[i])
                             - (1.0 - om_p[i]) * uold[i + 1])
        cm = 0.5 * l_m[i] * (1.0 - om_m[i])
        am = 0.5 * l_m[i] * (om_m[i] * (unew[i + 1] - uold[i])
                             - (1.0 - om_m[i]) * uold[i - 1])
        gamma = rh * (vp[i + 1] * (1.0 - cp) - vm[i] * (1.0 - cm))
        # interface values owned by the neighbors, fixed during this solve
        rpl = unew[i - 1] - 0.5 * l_p[i - 1] * (
            om_p[i - 1] * (unew[i - 2] - uold[i - 1])
            + (1.0 - om_p[i - 1]) * (unew[i - 1] - uold[i]))
        rmn = unew[i + 1] - 0.5 * l_m[i + 1] * (
            om_m[i + 1] * (unew[i + 2] - uold[i + 1])
            + (1.0 - om_m[i + 1]) * (unew[i + 1] - uold[i]))
        R = (qold[i] + rh * (vp[i] * rpl - vm[i + 1] * rmn)
             + rh * (vp[i + 1] * ap - vm[i] * am))
        x, it, conv = solve_cell(a, p, gamma, R, unew[i], abs_tol, max_iter, reg_floor)
        d = abs(x - unew[i])
        if d > dmax:
            dmax = d
        unew[i] = x
        total += it
        ok = ok and conv
        i += step
    return dmax, total, ok


@njit(cache=True)
def interfaces_first_1d(unew, e0, e1, up, um):
    """First order upwind interface values on the edge range [e0, e1)."""
    for e in range(e0, e1):
        up[e] = unew[e - 1]
        um[e] = unew[e]


@njit(cache=True)
def interfaces_limited_1d(unew, uold, om_p, om_m, l_p, l_m, e0, e1, up, um):
    """Reconstructed interface values of the limited scheme on [e0, e1).

    up[e] multiplies the positive edge velocity (upwind cell e-1), um[e] the
    negative one (upwind cell e).
    """
    for e in range(e0, e1):
        c = e - 1
        up[e] = unew[c] - 0.5 * l_p[c] * (
            om_p[c] * (unew[c - 1] - uold[c])
            + (1.0 - om_p[c]) * (unew[c] - uold[c + 1]))
        c = e
        um[e] = unew[c] - 0.5 * l_m[c] * (
            om_m[c] * (unew[c + 1] - uold[c])
            + (1.0 - om_m[c]) * (unew[c] - uold[c - 1]))


@njit(cache=True)
def weno_limiters_1d(ustar, uold, eps, om_p, om_m, l_p, l_m, c0, c1):
    """Per-cell WENO weights and range limiters from a predictor field.

    For cell i the two one-sided jumps of the predictor give smoothness
    indicators b_minus = (ustar[i]-ustar[i-1])**2 + eps and
    b_plus = (ustar[i+1]-ustar[i])**2 + eps. Each blend candidate is weighted
    by the inverse square of its own indicator, so in smooth regions both
    weights approach 1/2 and near a jump the blend leans away from it.

    The limiter l is the largest value in [0, 1] for which the reconstructed
    interface value stays inside the min/max envelope of its stencil; the
    reconstruction is affine in l, so the bound is in closed form.
    """
    for i in range(c0, c1):
        dm = ustar[i] - ustar[i - 1]
        dp = ustar[i + 1] - ustar[i]
        bm = dm * dm + eps
        bp = dp * dp + eps
        a_up = 0.5 / (bm * bm)
        a_dn = 0.5 / (bp * bp)
        w = a_up / (a_up + a_dn)
        om_p[i] = w
        # mirrored roles for the negative branch
        w_m = a_dn / (a_dn + a_up)
        om_m[i] = w_m

        # positive branch: edge i+1/2, stencil {ustar[i-1], ustar[i], uold[i], uold[i+1]}
        d = w * (ustar[i - 1] - uold[i]) + (1.0 - w) * (ustar[i] - uold[i + 1])
        lo = min(min(ustar[i - 1], ustar[i]), min(uold[i], uold[i + 1]))
        hi = max(max(ustar[i - 1], ustar[i]), max(uold[i], uold[i + 1]))
        if d > 0.0:
            lim = 2.0 * (ustar[i] - lo) / d
        elif d < 0.0:
            lim = 2.0 * (ustar[i] - hi) / d
        else:
            lim = 1.0
        l_p[i] = min(1.0, lim)

        # negative branch: edge i-1/2, stencil {ustar[i+1], ustar[i], uold[i], uold[i-1]}
        d = w_m * (ustar[i + 1] - uold[i]) + (1.0 - w_m) * (ustar[i] - uold[i - 1])
        lo = min(min(ustar[i + 1], ustar[i]), min(uold[i], uold[i - 1]))
        hi = max(max(ustar[i + 1], ustar[i]), max(uold[i], uold[i - 1]))
        if d > 0.0:
            lim = 2.0 * (ustar[i] - lo) / d
        elif d < 0.0:
            lim = 2.0 * (ustar[i] - hi) / d
        else:
            lim = 1.0
        l_m[i] = min(1.0, lim)


# ---------------------------------------------------------------------------
# 2D sweeps (first index x, second index y)


@njit(cache=True)
def sweep_first_2d(unew, uold, qold, vpx, vmx, wpy, wmy, rh, a, p,
                   i0, i1, si, j0, j1, sj, abs_tol, max_iter, reg_floor):
    """One Gauss-Seidel sweep of the 2D first order implicit scheme."""
    dmax = 0.0
    total = 0
    ok = True
    i = i0
    while i != i1:
        j = j0
        while j != j1:
            gamma = rh * (vpx[i + 1, j] - vmx[i, j] + wpy[i, j + 1] - wmy[i, j])
            R = qold[i, j] + rh * (vpx[i, j] * unew[i - 1, j]
                                   - vmx[i + 1, j] * unew[i + 1, j]
                                   + wpy[i, j] * unew[i, j - 1]
                                   - wmy[i, j + 1] * unew[i, j + 1])
            x, it, conv = solve_cell(a, p, gamma, R, unew[i, j],
                                     abs_tol, max_iter, reg_floor)
            d = abs(x - unew[i, j])
            if d > dmax:
                dmax = d
            unew[i, j] = x
            total += it
            ok = ok and conv
            j += sj
        i += si
    return dmax, total, ok


@njit(cache=True)
def sweep_limited_2d(unew, uold, qold, vpx, vmx, wpy, wmy, rh, a, p,
                     omxp, omxm, lxp, lxm, omyp, omym, lyp, lym,
                     i0, i1, si, j0, j1, sj, abs_tol, max_iter, reg_floor):
    """One Gauss-Seidel sweep of the 2D limited compact implicit scheme.

    The x and y interface reconstructions are the 1D formulas applied per
    axis with their own weight and limiter families.
    """
    dmax = 0.0
    total = 0
    ok = True
    i = i0
    while i != i1:
        j = j0
        while j != j1:
            cxp = 0.5 * lxp[i, j] * (1.0 - omxp[i, j])
            axp = 0.5 * lxp[i, j] * (omxp[i, j] * (unew[i - 1, j] - uold[i, j])
                                     - (1.0 - omxp[i, j]) * uold[i + 1, j])
            cxm = 0.5 * lxm[i, j] * (1.0 - omxm[i, j])
            axm = 0.5 * lxm[i, j] * (omxm[i, j] * (unew[i + 1, j] - uold[i, j])
                                     - (1.0 - omxm[i, j]) * uold[i - 1, j])
            cyp = 0.5 * lyp[i, j] * (1.0 - omyp[i, j])
            ayp = 0.5 * lyp[i, j] * (omyp[i, j] * (unew[i, j - 1] - uold[i, j])
                                     - (1.0 - omyp[i, j]) * uold[i, j + 1])
            cym = 0.5 * lym[i, j] * (1.0 - omym[i, j])
            aym = 0.5 * lym[i, j] * (omym[i, j] * (unew[i, j + 1] - uold[i, j])
                                     - (1.0 - omym[i, j]) * uold[i, j - 1])
            gamma = rh * (vpx[i + 1, j] * (1.0 - cxp) - vmx[i, j] * (1.0 - cxm)
                          + wpy[i, j + 1] * (1.0 - cyp) - wmy[i, j] * (1.0 - cym))
            rxp = unew[i - 1, j] - 0.5 * lxp[i - 1, j] * (
                omxp[i - 1, j] * (unew[i - 2, j] - uold[i - 1, j])
                + (1.0 - omxp[i - 1, j]) * (unew[i - 1, j] - uold[i, j]))
            rxm = unew[i + 1, j] - 0.5 * lxm[i + 1, j] * (
                omxm[i + 1, j] * (unew[i + 2, j] - uold[i + 1, j])
                + (1.0 - omxm[i + 1, j]) * (unew[i + 1, j] - uold[i, j]))
            ryp = unew[i, j - 1] - 0.5 * lyp[i, j - 1] * (
                omyp[i, j - 1] * (unew[i, j - 2] - uold[i, j - 1])
                + (1.0 - omyp[i, j - 1]) * (unew[i, j - 1] - uold[i, j]))
            rym = unew[i, j + 1] - 0.5 * lym[i, j + 1] * (
                omym[i, j + 1] * (unew[i, j + 2] - uold[i, j + 1])
                + (1.0 - omym[i, j + 1]) * (unew[i, j + 1] - uold[i, j]))
            R = (qold[i, j]
                 + rh * (vpx[i, j] * rxp - vmx[i + 1, j] * rxm
                         + wpy[i, j] * ryp - wmy[i, j + 1] * rym)
                 + rh * (vpx[i + 1, j] * axp - vmx[i, j] * axm
                         + wpy[i, j + 1] * ayp - wmy[i, j] * aym))
            x, it, conv = solve_cell(a, p, gamma, R, unew[i, j],
                                     abs_tol, max_iter, reg_floor)
            d = abs(x - unew[i, j])
            if d > dmax:
                dmax = d
            unew[i, j] = x
            total += it
            ok = ok and conv
            j += sj
        i += si
    return dmax, total, ok


@njit(cache=True)
def interfaces_limited_2d_x(unew, uold, omxp, omxm, lxp, lxm,
                            e0, e1, j0, j1, upx, umx):
    """Limited x-interface values on edges [e0, e1) x rows [j0, j1)."""
    for e in range(e0, e1):
        for j in range(j0, j1):
            c = e - 1
            upx[e, j] = unew[c, j] - 0.5 * lxp[c, j] * (
                omxp[c, j] * (unew[c - 1, j] - uold[c, j])
                + (1.0 - omxp[c, j]) * (unew[c, j] - uold[c + 1, j]))
            c = e
            umx[e, j] = unew[c, j] - 0.5 * lxm[c, j] * (
                omxm[c, j] * (unew[c + 1, j] - uold[c, j])
                + (1.0 - omxm[c, j]) * (unew[c, j] - uold[c - 1, j]))


@njit(cache=True)
def interfaces_limited_2d_y(unew, uold, omyp, omym, lyp, lym,
                            i0, i1, e0, e1, upy, umy):
    """Limited y-interface values on columns [i0, i1) x edges [e0, e1)."""
    for i in range(i0, i1):
        for e in range(e0, e1):
            c = e - 1
            upy[i, e] = unew[i, c] - 0.5 * lyp[i, c] * (
                omyp[i, c] * (unew[i, c - 1] - uold[i, c])
                + (1.0 - omyp[i, c]) * (unew[i, c] - uold[i, c + 1]))
            c = e
            umy[i, e] = unew[i, c] - 0.5 * lym[i, c] * (
                omym[i, c] * (unew[i, c + 1] - uold[i, c])
                + (1.0 - omym[i, c]) * (unew[i, c] - uold[i, c - 1]))


@njit(cache=True)
def weno_limiters_2d(ustar, uold, eps,
                     omxp, omxm, lxp, lxm, omyp, omym, lyp, lym,
                     c0, c1, d0, d1):
    """Axis-wise WENO weights and limiters on the cell rectangle [c0,c1) x [d0,d1)."""
    for i in range(c0, c1):
        for j in range(d0, d1):
            # x axis
            dm = ustar[i, j] - ustar[i - 1, j]
            dp = ustar[i + 1, j] - ustar[i, j]
            bm = dm * dm + eps
            bp = dp * dp + eps
            a_up = 0.5 / (bm * bm)
            a_dn = 0.5 / (bp * bp)
            w = a_up / (a_up + a_dn)
            w_m = a_dn / (a_dn + a_up)
            omxp[i, j] = w
            omxm[i, j] = w_m
            d = w * (ustar[i - 1, j] - uold[i, j]) + (1.0 - w) * (ustar[i, j] - uold[i + 1, j])
            lo = min(min(ustar[i - 1, j], ustar[i, j]), min(uold[i, j], uold[i + 1, j]))
            hi = max(max(ustar[i - 1, j], ustar[i, j]), max(uold[i, j], uold[i + 1, j]))
            if d > 0.0:
                lim = 2.0 * (ustar[i, j] - lo) / d
            elif d < 0.0:
                lim = 2.0 * (ustar[i, j] - hi) / d
            else:
                lim = 1.0
            lxp[i, j] = min(1.0, lim)
            d = w_m * (ustar[i + 1, j] - uold[i, j]) + (1.0 - w_m) * (ustar[i, j] - uold[i - 1, j])
            lo = min(min(ustar[i + 1, j], ustar[i, j]), min(uold[i, j], uold[i - 1, j]))
            hi = max(max(ustar[i + 1, j], ustar[i, j]), max(uold[i, j], uold[i - 1, j]))
            if d > 0.0:
                lim = 2.0 * (ustar[i, j] - lo) / d
            elif d < 0.0:
                lim = 2.0 * (ustar[i, j] - hi) / d
            else:
                lim = 1.0
            lxm[i, j] = min(1.0, lim)

            # y axis
            dm = ustar[i, j] - ustar[i, j - 1]
            dp = ustar[i, j + 1] - ustar[i, j]
            bm = dm * dm + eps
            bp = dp * dp + eps
            a_up = 0.5 / (bm * bm)
            a_dn = 0.5 / (bp * bp)
            w = a_up / (a_up + a_dn)
            w_m = a_dn / (a_dn + a_up)
            omyp[i, j] = w
            omym[i, j] = w_m
            d = w * (ustar[i, j - 1] - uold[i, j]) + (1.0 - w) * (ustar[i, j] - uold[i, j + 1])
            lo = min(min(ustar[i, j - 1], ustar[i, j]), min(uold[i, j], uold[i, j + 1]))
            hi = max(max(ustar[i, j - 1], ustar[i, j]), max(uold[i, j], uold[i, j + 1]))
            if d > 0.0:
                lim = 2.0 * (ustar[i, j] - lo) / d
            elif d < 0.0:
                lim = 2.0 * (ustar[i, j] - hi) / d
            else:
                lim = 1.0
            lyp[i, j] = min(1.0, lim)
            d = w_m * (ustar[i, j + 1] - uold[i, j]) + (1.0 - w_m) * (ustar[i, j] - uold[i, j - 1])
            lo = min(min(ustar[i, j + 1], ustar[i, j]), min(uold[i, j], uold[i, j - 1]))
            hi = max(max(ustar[i, j + 1], ustar[i, j]), max(uold[i, j], uold[i, j - 1]))
            if d > 0.0:
                lim = 2.0 * (ustar[i, j] - lo) / d
            elif d < 0.0:
                lim = 2.0 * (ustar[i, j] - hi) / d
            else:
                lim = 1.0
            lym[i, j] = min(1.0, lim)


def warm_up():
    """Compile every kernel on a tiny problem (used before timing runs)."""
    n = 8
    g = 2
    u = np.linspace(0.1, 0.9, n + 2 * g)
    uo = u.copy()
    q = F_array(u, 1.0, 0.5)
    vp = np.full(n + 2 * g + 1, 1.0)
    vm = np.zeros(n + 2 * g + 1)
    om = np.full(n + 2 * g, 0.5)
    ll = np.ones(n + 2 * g)
    up = np.zeros(n + 2 * g + 1)
    um = np.zeros(n + 2 * g + 1)
    invert_range(u.copy(), q, 1.0, 0.5, g, g + n, 1e-12, 50, 1e-6)
    sweep_first_1d(u.copy(), uo, q, vp, vm, 0.5, 1.0, 0.5, g, g + n, 1,
                   1e-12, 50, 1e-6)
    sweep_limited_1d(u.copy(), uo, q, vp, vm, 0.5, 1.0, 0.5, om, om, ll, ll,
                     g, g + n, 1, 1e-12, 50, 1e-6)
    interfaces_first_1d(u, g, g + n + 1, up, um)
    interfaces_limited_1d(u, uo, om, om, ll, ll, g, g + n + 1, up, um)
    weno_limiters_1d(u, uo, 1e-6, om.copy(), om.copy(), ll.copy(), ll.copy(),
                     g - 1, g + n + 1)
    m = 6
    nt = m + 2 * g
    u2 = np.outer(np.linspace(0.1, 0.9, nt), np.linspace(0.2, 0.8, nt))
    uo2 = u2.copy()
    q2 = u2 + np.sqrt(np.abs(u2))
    vpx = np.full((nt + 1, nt), 1.0)
    vmx = np.zeros((nt + 1, nt))
    wpy = np.full((nt, nt + 1), 0.5)
    wmy = np.zeros((nt, nt + 1))
    om2 = np.full((nt, nt), 0.5)
    l2 = np.ones((nt, nt))
    upx = np.zeros((nt + 1, nt))
    umx = np.zeros((nt + 1, nt))
    upy = np.zeros((nt, nt + 1))
    umy = np.zeros((nt, nt + 1))
    invert_rect(u2.copy(), q2, 1.0, 0.5, g, g + m, g, g + m, 1e-12, 50, 1e-6)
    sweep_first_2d(u2.copy(), uo2, q2, vpx, vmx, wpy, wmy, 0.5, 1.0, 0.5,
                   g, g + m, 1, g, g + m, 1, 1e-12, 50, 1e-6)
    sweep_limited_2d(u2.copy(), uo2, q2, vpx, vmx, wpy, wmy, 0.5, 1.0, 0.5,
                     om2, om2, l2, l2, om2, om2, l2, l2,
                     g, g + m, 1, g, g + m, 1, 1e-12, 50, 1e-6)
    interfaces_limited_2d_x(u2, uo2, om2, om2, l2, l2, g, g + m + 1, g, g + m, upx, umx)
    interfaces_limited_2d_y(u2, uo2, om2, om2, l2, l2, g, g + m, g, g + m + 1, upy, umy)
    weno_limiters_2d(u2, uo2, 1e-6, om2.copy(), om2.copy(), l2.copy(), l2.copy(),
                     om2.copy(), om2.copy(), l2.copy(), l2.copy(),
                     g - 1, g + m + 1, g - 1, g + m + 1)
