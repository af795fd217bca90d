"""NumPy implementation of the safety-game attractor kernel.

Same wave-synchronized backward induction as the compiled extension, with
the ragged per-state neighbor gathers vectorized per wave.  Results (losing
sets and ranks) are identical to the compiled kernel; only speed differs.

State index convention: state = rev_id * ns + spy_id.  A spy-to-move state
is lost when every spy successor is immediately bad or leads to a lost
rev-to-move state; a rev-to-move state is lost when some rev successor is a
lost spy-to-move state.  Team moves are reversible (undirected edges), so
predecessor lists equal successor lists.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix


def _ragged_gather(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate indices[indptr[r]:indptr[r+1]] for each r in rows.

    Returns (gathered values, repeat counts per row).
    """
    starts = indptr[rows]
    counts = indptr[rows + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype), counts
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    flat = np.repeat(starts, counts) + (np.arange(total, dtype=np.int64) - offsets)
    return indices[flat], counts


def attractor(
    rev_indptr: np.ndarray,
    rev_indices: np.ndarray,
    spy_indptr: np.ndarray,
    spy_indices: np.ndarray,
    bad: np.ndarray,
    nr: int,
    ns: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    size = nr * ns
    losing_r = np.zeros(size, dtype=np.uint8)
    losing_s = np.zeros(size, dtype=np.uint8)
    rank_r = np.full(size, -1, dtype=np.int32)
    rank_s = np.full(size, -1, dtype=np.int32)

    not_bad = (bad == 0).reshape(nr, ns)
    spy_adj = csr_matrix(
        (np.ones(len(spy_indices), dtype=np.int32), spy_indices, spy_indptr),
        shape=(ns, ns),
    )
    # safe_cnt[rev, spy] = number of not-bad options among spy successors
    safe_cnt = np.ascontiguousarray((spy_adj @ not_bad.astype(np.int32).T).T).reshape(-1)

    s_states = np.flatnonzero(safe_cnt == 0).astype(np.int64)
    losing_s[s_states] = 1
    rank_s[s_states] = 0

    k = 0
    while len(s_states):
        # Lost spy-to-move states make every rev predecessor lost (rank k+1).
        revs = s_states // ns
        spys = s_states % ns
        pred_rev, counts = _ragged_gather(rev_indptr, rev_indices, revs)
        targets = pred_rev.astype(np.int64) * ns + np.repeat(spys, counts)
        fresh = np.unique(targets[losing_r[targets] == 0])
        losing_r[fresh] = 1
        rank_r[fresh] = k + 1

        # Each newly lost rev-to-move state (rev, spy') eliminates the option
        # spy' from every spy predecessor, but only where it counted as safe.
        r_states = fresh[bad[fresh] == 0]
        revs = r_states // ns
        spyp = r_states % ns
        pred_spy, counts = _ragged_gather(spy_indptr, spy_indices, spyp)
        targets = np.repeat(revs, counts) * ns + pred_spy.astype(np.int64)
        np.subtract.at(safe_cnt, targets, 1)
        touched = np.unique(targets)
        s_states = touched[(safe_cnt[touched] == 0) & (losing_s[touched] == 0)]
        losing_s[s_states] = 1
        rank_s[s_states] = k + 1
        k += 1

    return losing_r, losing_s, rank_r, rank_s
