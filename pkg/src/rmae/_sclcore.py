"""Flat successive-cancellation list decoder core.

Everything here is written in plain loop-and-array style so a single
source serves two backends: jitted through numba when it is
importable, or executed as ordinary Python otherwise (slow, but
identical arithmetic — no fastmath, so results match bit for bit).

Layout per path (list row), sharing one channel-LLR vector:
  llr  (L, N-1)  depth-d soft values at offset N - (N >> (d-1)), d>=1
  ps   (L, N-1)  left-child bit aggregates at offset N - (N >> d)
  uh   (L, N)    decided input bits

At an information leaf the 2*nact candidate metrics are stable-sorted
(candidate id 2p+bit, so equal metrics prefer the lower path row and
bit 0). A parent whose two children both survive keeps bit 0 in place
and copies itself into a freed row for bit 1; single survivors update
in place, so rows move only when paths actually fork. Copies carry
only the live state: after leaf i, the depth-d soft segment matters
iff leaf i sits in the left half of its depth-d node, the depth-d
aggregate iff it sits in the right half, and decided bits up to i.
Survivor rows are sorted by metric once, at the end.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

# Rule tags, mirroring codespec (asserted equal there at import time).
RULE_INFO = -1
RULE_ZERO = -2

# Above this many candidates the stable sort switches from insertion
# to mergesort; both produce the identical permutation.
_SORT_SWITCH = 64


def _scl_run_impl(chan, rule, L, n):
    """List-decode one block.

    Returns (uh, pm, codewords, nact) with exactly nact rows each,
    sorted by ascending path metric (stable, so metric ties keep the
    internal row order, which is itself deterministic).
    """
    N = 1 << n
    W = N - 1 if N > 1 else 1
    loff = np.zeros(n + 1, np.int64)
    soff = np.zeros(n + 1, np.int64)
    for d in range(1, n + 1):
        loff[d] = N - (N >> (d - 1))
    for d in range(n):
        soff[d] = N - (N >> d)

    llr = np.empty((L, W), chan.dtype)
    ps = np.empty((L, W), np.uint8)
    uh = np.empty((L, N), np.uint8)
    pm = np.zeros(L, np.float64)
    cw = np.empty((L, N), np.uint8)
    prop = np.empty(N, np.uint8)
    cpm = np.empty(2 * L, np.float64)
    corder = np.empty(2 * L, np.int64)
    surv = np.empty(2 * L, np.uint8)
    free_rows = np.empty(L, np.int64)
    lslot = loff[n]
    nact = 1

    for i in range(N):
        # Soft values along the path to leaf i: one g step at the depth
        # where the path diverges from leaf i-1's, then f steps below.
        if n > 0:
            if i == 0:
                dstart = 1
            else:
                tz = 0
                while ((i >> tz) & 1) == 0:
                    tz += 1
                dg = n - tz
                half = N >> dg
                po = loff[dg - 1]
                so = soff[dg - 1]
                oo = loff[dg]
                if dg == 1:
                    for p in range(nact):
                        for s in range(half):
                            a = chan[s]
                            b = chan[s + half]
                            if ps[p, so + s] == 1:
                                llr[p, oo + s] = b - a
                            else:
                                llr[p, oo + s] = b + a
                else:
                    for p in range(nact):
                        for s in range(half):
                            a = llr[p, po + s]
                            b = llr[p, po + s + half]
                            if ps[p, so + s] == 1:
                                llr[p, oo + s] = b - a
                            else:
                                llr[p, oo + s] = b + a
                dstart = dg + 1
            for d in range(dstart, n + 1):
                half = N >> d
                po = loff[d - 1]
                oo = loff[d]
                if d == 1:
                    for p in range(nact):
                        for s in range(half):
                            a = chan[s]
                            b = chan[s + half]
                            aa = abs(a)
                            ab = abs(b)
                            m = aa if aa < ab else ab
                            llr[p, oo + s] = -m if (a < 0.0) != (b < 0.0) else m
                else:
                    for p in range(nact):
                        for s in range(half):
                            a = llr[p, po + s]
                            b = llr[p, po + s + half]
                            aa = abs(a)
                            ab = abs(b)
                            m = aa if aa < ab else ab
                            llr[p, oo + s] = -m if (a < 0.0) != (b < 0.0) else m

        rl = rule[i]
        if rl == RULE_INFO:
            tot = 2 * nact
            for p in range(nact):
                lam = chan[0] if n == 0 else llr[p, lslot]
                cpm[2 * p] = pm[p] + (-lam if lam < 0.0 else 0.0)
                cpm[2 * p + 1] = pm[p] + (lam if lam >= 0.0 else 0.0)
            if tot <= L:
                # Every candidate survives; bit-1 children fork into
                # the untouched rows above nact.
                for p in range(nact):
                    q = nact + p
                    _copy_live(llr, ps, uh, p, q, i, n, N, loff, soff)
                    uh[q, i] = 1
                    pm[q] = cpm[2 * p + 1]
                    uh[p, i] = 0
                    pm[p] = cpm[2 * p]
                nact = tot
            else:
                if tot <= _SORT_SWITCH:
                    for c in range(tot):
                        v = cpm[c]
                        j = c
                        while j > 0 and cpm[corder[j - 1]] > v:
                            corder[j] = corder[j - 1]
                            j -= 1
                        corder[j] = c
                else:
                    corder[:tot] = np.argsort(cpm[:tot], kind="mergesort")
                for c in range(tot):
                    surv[c] = 0
                for q in range(L):
                    surv[corder[q]] = 1
                nfree = 0
                for p in range(nact):
                    if surv[2 * p] == 0 and surv[2 * p + 1] == 0:
                        free_rows[nfree] = p
                        nfree += 1
                for p in range(nact, L):
                    free_rows[nfree] = p
                    nfree += 1
                fi = 0
                for p in range(nact):
                    s0 = surv[2 * p]
                    s1 = surv[2 * p + 1]
                    if s0 == 1:
                        if s1 == 1:
                            q = free_rows[fi]
                            fi += 1
                            _copy_live(llr, ps, uh, p, q, i, n, N, loff, soff)
                            uh[q, i] = 1
                            pm[q] = cpm[2 * p + 1]
                        uh[p, i] = 0
                        pm[p] = cpm[2 * p]
                    elif s1 == 1:
                        uh[p, i] = 1
                        pm[p] = cpm[2 * p + 1]
                nact = L
        else:
            for p in range(nact):
                lam = chan[0] if n == 0 else llr[p, lslot]
                ub = np.uint8(0) if rl == RULE_ZERO else uh[p, rl]
                uh[p, i] = ub
                if ub == 0:
                    if lam < 0.0:
                        pm[p] -= lam
                else:
                    if lam >= 0.0:
                        pm[p] += lam

        # Bit aggregates bubble up while the finished node is a right
        # child; leaving through the root yields the codeword. A left
        # child (even leaf) never climbs: its bit is stored directly.
        if n > 0 and (i & 1) == 0:
            off = soff[n - 1]
            for p in range(nact):
                ps[p, off] = uh[p, i]
        else:
            for p in range(nact):
                prop[0] = uh[p, i]
                ln = 1
                t = n
                while t > 0 and ((i >> (n - t)) & 1) == 1:
                    off = soff[t - 1]
                    for s in range(ln):
                        x = ps[p, off + s] ^ prop[s]
                        prop[ln + s] = prop[s]
                        prop[s] = x
                    ln <<= 1
                    t -= 1
                if t == 0:
                    for s in range(N):
                        cw[p, s] = prop[s]
                else:
                    off = soff[t - 1]
                    for s in range(ln):
                        ps[p, off + s] = prop[s]

    final = np.argsort(pm[:nact], kind="mergesort")
    uh_out = np.empty((nact, N), np.uint8)
    pm_out = np.empty(nact, np.float64)
    cw_out = np.empty((nact, N), np.uint8)
    for q in range(nact):
        src_row = final[q]
        uh_out[q, :] = uh[src_row, :]
        cw_out[q, :] = cw[src_row, :]
        pm_out[q] = pm[src_row]
    return uh_out, pm_out, cw_out, nact


def _copy_live_impl(llr, ps, uh, p, q, i, n, N, loff, soff):
    """Fork path row p into row q at leaf i, copying only live state."""
    for d in range(1, n):
        if ((i >> (n - 1 - d)) & 1) == 0:
            off = loff[d]
            ln = N >> d
            llr[q, off:off + ln] = llr[p, off:off + ln]
    for d in range(n):
        if ((i >> (n - 1 - d)) & 1) == 1:
            off = soff[d]
            ln = N >> (d + 1)
            ps[q, off:off + ln] = ps[p, off:off + ln]
    uh[q, :i] = uh[p, :i]


_copy_live = njit(cache=True)(_copy_live_impl) if HAVE_NUMBA else _copy_live_impl
scl_run_py = _scl_run_impl
scl_run = njit(cache=True)(_scl_run_impl) if HAVE_NUMBA else _scl_run_impl


def _ae_run_impl(chan, yobs, rule, L, n, perms):
    """Fused ensemble decode over a shared rule table.

    Branch m feeds the decoder with chan scattered through perms[m],
    pulls the best-metric path back through the inverse, and scores it
    against yobs; the lowest squared distance wins, first branch on
    ties. Returns (codeword, metric, path_metric, branch index).
    """
    N = 1 << n
    M = perms.shape[0]
    pchan = np.empty(N, chan.dtype)
    branch_cw = np.empty(N, np.uint8)
    best_cw = np.zeros(N, np.uint8)
    best_metric = np.inf
    best_pm = 0.0
    best_branch = -1
    for m in range(M):
        for idx in range(N):
            pchan[perms[m, idx]] = chan[idx]
        uh, pm, cw, nact = scl_run(pchan, rule, L, n)
        met = 0.0
        for idx in range(N):
            xb = cw[0, perms[m, idx]]
            branch_cw[idx] = xb
            d = yobs[idx] - (1.0 - 2.0 * xb)
            met += d * d
        if met < best_metric:
            best_metric = met
            best_pm = pm[0]
            best_branch = m
            for idx in range(N):
                best_cw[idx] = branch_cw[idx]
    return best_cw, best_metric, best_pm, best_branch


ae_run = njit(cache=True)(_ae_run_impl) if HAVE_NUMBA else _ae_run_impl
