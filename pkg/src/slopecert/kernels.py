"""Integerized hot kernels for the sub-module candidate search.

The admissibility candidate system is exact integer arithmetic once slopes
are scaled by a common denominator D and the (1/e) factors are cleared by
cross-multiplication, so the search runs on int64 without losing exactness.
Values in scope are tiny (|kappa| <= a few hundred, N <= 9), far from
overflow.

Three interchangeable implementations are provided:

* ``numba``  -- @njit loops (default when numba imports);
* ``numpy``  -- vectorized over the theta-choice space;
* ``python`` -- plain loops, the readable reference.

Selection: environment variable ``SLOPECERT_KERNEL`` in {"numba", "numpy",
"python"}; unset picks numba when available, else numpy.  All three walk
candidates in the identical order (subsets by size then lexicographic;
per-embedding image sets lexicographic, last embedding fastest), so the
reported witness is implementation-independent.

A candidate is a proper nonempty subset I of {1..N} together with one image
set per embedding; it *passes* when both I and its complement satisfy every
ascending-prefix inequality

    e * sum_{y<=x} D*slope[i_y]  >=  D * sum_sigma prefix_x kappa[sigma][img_y]

and both totals hold with equality.  It is *misaligned* at row tau when the
induced tau-assignment changes some weight value.
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False


def active_backend() -> str:
    """Resolve the kernel backend from SLOPECERT_KERNEL."""
    choice = os.environ.get("SLOPECERT_KERNEL", "").strip().lower()
    if choice in ("numba", "numpy", "python"):
        if choice == "numba" and not _HAVE_NUMBA:
            return "numpy"
        return choice
    return "numba" if _HAVE_NUMBA else "numpy"


@lru_cache(maxsize=None)
def subset_tables(n: int):
    """Candidate enumeration tables for rank n.

    Returns (sub_masks, comb_flat, comb_off):
      sub_masks: proper nonempty subsets of {0..n-1} as bitmasks, ordered by
                 (popcount, sorted-tuple lexicographic);
      comb_flat/comb_off: for each k, the k-element image masks in
                 lexicographic order, flattened with offsets comb_off[k].
    """
    subs = []
    for k in range(1, n):
        for tup in combinations(range(n), k):
            subs.append(sum(1 << b for b in tup))
    flat = []
    off = [0]
    for k in range(n + 1):
        for tup in combinations(range(n), k):
            flat.append(sum(1 << b for b in tup))
        off.append(len(flat))
    return (
        np.array(subs, dtype=np.int64),
        np.array(flat, dtype=np.int64),
        np.array(off, dtype=np.int64),
    )


def _bits(mask: int, n: int):
    return [b for b in range(n) if mask >> b & 1]


# ---------------------------------------------------------------------------
# python reference
# ---------------------------------------------------------------------------


def _search_python(kappa, slopes_scaled, e, denom, tau, require_misaligned=True):
    """First candidate in enumeration order that passes (and is misaligned).

    Returns (found, subset_mask, image_masks tuple) with masks over 0-based
    bits, or (False, 0, ()) when none exists.
    """
    kappa = [list(map(int, row)) for row in kappa]
    S = list(map(int, slopes_scaled))
    m, n = len(kappa), len(S)
    sub_masks, comb_flat, comb_off = subset_tables(n)
    for mask in map(int, sub_masks):
        inside = _bits(mask, n)
        outside = [b for b in range(n) if b not in inside]
        k = len(inside)
        choices = [int(v) for v in comb_flat[comb_off[k] : comb_off[k + 1]]]
        idx = [0] * m
        total = len(choices) ** m
        for flat in range(total):
            rem = flat
            for s in range(m - 1, -1, -1):
                idx[s] = rem % len(choices)
                rem //= len(choices)
            img = [choices[idx[s]] for s in range(m)]
            if _passes_python(kappa, S, e, denom, inside, outside, img):
                if not require_misaligned or _misaligned_python(kappa[tau], inside, outside, img[tau]):
                    return True, mask, tuple(img)
    return False, 0, ()


def _passes_python(kappa, S, e, denom, inside, outside, img):
    m, n = len(kappa), len(S)
    for part, masks in ((inside, img), (outside, [(~v) & ((1 << n) - 1) for v in img])):
        cols = [_bits(masks[s], n) for s in range(m)]
        newt = 0
        hodge = 0
        for x, b in enumerate(part):
            newt += S[b]
            for s in range(m):
                hodge += kappa[s][cols[s][x]]
            if e * newt < denom * hodge:
                return False
        if e * newt != denom * hodge:
            return False
    return True


def _misaligned_python(kappa_tau, inside, outside, img_tau):
    n = len(kappa_tau)
    comp = (~img_tau) & ((1 << n) - 1)
    for part, cols in ((inside, _bits(img_tau, n)), (outside, _bits(comp, n))):
        for x, b in enumerate(part):
            if kappa_tau[cols[x]] != kappa_tau[b]:
                return True
    return False


# ---------------------------------------------------------------------------
# numpy implementation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _prefix_tables_np(n: int, k: int):
    """Positions of the k-combinations of range(n) and of their complements."""
    ins = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)
    outs = np.array(
        [[b for b in range(n) if b not in set(tup)] for tup in combinations(range(n), k)],
        dtype=np.int64,
    ).reshape(-1, n - k)
    return ins, outs


def _search_numpy(kappa, slopes_scaled, e, denom, tau, require_misaligned=True):
    kappa = np.asarray(kappa, dtype=np.int64)
    S = np.asarray(slopes_scaled, dtype=np.int64)
    m, n = kappa.shape
    sub_masks, _, _ = subset_tables(n)
    for mask in map(int, sub_masks):
        inside = np.array(_bits(mask, n), dtype=np.int64)
        outside = np.array([b for b in range(n) if not mask >> b & 1], dtype=np.int64)
        k = len(inside)
        ins, outs = _prefix_tables_np(n, k)
        C = ins.shape[0]
        # Hodge prefixes per (embedding, choice): kappa values at image
        # positions, cumulated along the subset walk.
        hp_in = np.cumsum(kappa[:, ins], axis=2)
        hp_out = np.cumsum(kappa[:, outs], axis=2)
        np_in = e * np.cumsum(S[inside])
        np_out = e * np.cumsum(S[outside])
        shape = (C,) * m
        ok = np.ones(shape, dtype=bool)
        for prefixes, newton in ((hp_in, np_in), (hp_out, np_out)):
            for x in range(prefixes.shape[2]):
                acc = np.zeros(shape, dtype=np.int64)
                for s in range(m):
                    view = [1] * m
                    view[s] = C
                    acc = acc + prefixes[s, :, x].reshape(view)
                if x + 1 < prefixes.shape[2]:
                    ok &= newton[x] >= denom * acc
                else:
                    ok &= newton[x] == denom * acc
                if not ok.any():
                    break
            if not ok.any():
                break
        if not ok.any():
            continue
        if require_misaligned:
            mis_tau = np.zeros(C, dtype=bool)
            for ci in range(C):
                mis_tau[ci] = bool(
                    (kappa[tau, ins[ci]] != kappa[tau, inside]).any()
                    or (kappa[tau, outs[ci]] != kappa[tau, outside]).any()
                )
            view = [1] * m
            view[tau] = C
            ok &= mis_tau.reshape(view)
        if ok.any():
            flat = int(np.argmax(ok.reshape(-1)))
            digits = np.unravel_index(flat, shape)
            img = tuple(int(np.sum(1 << ins[d])) for d in digits)
            return True, mask, img
    return False, 0, ()


# ---------------------------------------------------------------------------
# numba implementation
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @numba.njit(cache=False)
    def _search_numba_core(kappa, S, e, denom, tau, sub_masks, comb_flat, comb_off, require_mis, out):
        m, n = kappa.shape
        inside = np.empty(n, dtype=np.int64)
        outside = np.empty(n, dtype=np.int64)
        icols = np.empty((m, n), dtype=np.int64)
        ocols = np.empty((m, n), dtype=np.int64)
        idx = np.empty(m, dtype=np.int64)
        for si in range(sub_masks.shape[0]):
            mask = sub_masks[si]
            k = 0
            nk = 0
            for b in range(n):
                if mask >> b & 1:
                    inside[k] = b
                    k += 1
                else:
                    outside[nk] = b
                    nk += 1
            c0 = comb_off[k]
            C = comb_off[k + 1] - c0
            total = 1
            for _ in range(m):
                total *= C
            for flat in range(total):
                rem = flat
                for s in range(m - 1, -1, -1):
                    idx[s] = rem % C
                    rem //= C
                # decode image columns per embedding
                for s in range(m):
                    cm = comb_flat[c0 + idx[s]]
                    a = 0
                    b2 = 0
                    for b in range(n):
                        if cm >> b & 1:
                            icols[s, a] = b
                            a += 1
                        else:
                            ocols[s, b2] = b
                            b2 += 1
                good = True
                newt = 0
                hodge = 0
                for x in range(k):
                    newt += S[inside[x]]
                    for s in range(m):
                        hodge += kappa[s, icols[s, x]]
                    if x + 1 < k:
                        if e * newt < denom * hodge:
                            good = False
                            break
                    else:
                        if e * newt != denom * hodge:
                            good = False
                if good:
                    newt = 0
                    hodge = 0
                    for x in range(nk):
                        newt += S[outside[x]]
                        for s in range(m):
                            hodge += kappa[s, ocols[s, x]]
                        if x + 1 < nk:
                            if e * newt < denom * hodge:
                                good = False
                                break
                        else:
                            if e * newt != denom * hodge:
                                good = False
                if not good:
                    continue
                if require_mis:
                    mis = False
                    for x in range(k):
                        if kappa[tau, icols[tau, x]] != kappa[tau, inside[x]]:
                            mis = True
                            break
                    if not mis:
                        for x in range(nk):
                            if kappa[tau, ocols[tau, x]] != kappa[tau, outside[x]]:
                                mis = True
                                break
                    if not mis:
                        continue
                out[0] = 1
                out[1] = mask
                for s in range(m):
                    out[2 + s] = comb_flat[c0 + idx[s]]
                return
        out[0] = 0


def _search_numba(kappa, slopes_scaled, e, denom, tau, require_misaligned=True):
    kappa = np.ascontiguousarray(np.asarray(kappa, dtype=np.int64))
    S = np.ascontiguousarray(np.asarray(slopes_scaled, dtype=np.int64))
    m, n = kappa.shape
    sub_masks, comb_flat, comb_off = subset_tables(n)
    out = np.zeros(2 + m, dtype=np.int64)
    _search_numba_core(
        kappa, S, np.int64(e), np.int64(denom), np.int64(tau),
        sub_masks, comb_flat, comb_off, require_misaligned, out,
    )
    if out[0]:
        return True, int(out[1]), tuple(int(v) for v in out[2 : 2 + m])
    return False, 0, ()


_BACKENDS = {"python": _search_python, "numpy": _search_numpy}
if _HAVE_NUMBA:
    _BACKENDS["numba"] = _search_numba


def find_candidate(kappa, slopes_scaled, e, denom, tau, require_misaligned=True, backend=None):
    """First passing (optionally misaligned) candidate, backend-dispatched.

    ``kappa``: per-embedding ascending weight rows; ``slopes_scaled``: slopes
    times ``denom``; ``tau``: 0-based distinguished embedding.
    """
    name = backend or active_backend()
    fn = _BACKENDS.get(name)
    if fn is None:
        fn = _BACKENDS["numpy"]
    return fn(kappa, slopes_scaled, int(e), int(denom), int(tau), require_misaligned)
