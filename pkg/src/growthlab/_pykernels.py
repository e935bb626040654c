"""Pure-Python (numpy) set-arithmetic kernels.

Same contract as the compiled ``_ckernels`` module. All inputs are sorted,
duplicate-free ``int64`` arrays; callers guarantee results fit in ``int64``.
A kernel returns ``None`` when its result would exceed ``max_size``.
"""
import numpy as np

ADD = 0
MUL = 1

_CHUNK = 1 << 22
# Above this many byte-ops the shift-or loop loses to an FFT convolution.
_FFT_THRESHOLD = 1 << 27


def dense_sumset(x, y, max_size):
    x0, y0 = int(x[0]), int(y[0])
    xo = x - x0
    yo = y - y0
    if len(xo) < len(yo):
        xo, yo = yo, xo
    span_big = int(xo[-1]) + 1
    span = span_big + int(yo[-1])
    if len(yo) * span > _FFT_THRESHOLD:
        size = 1 << (span - 1).bit_length()
        a = np.zeros(size)
        b = np.zeros(size)
        a[xo] = 1.0
        b[yo] = 1.0
        conv = np.fft.irfft(np.fft.rfft(a) * np.fft.rfft(b), size)[:span]
        idx = np.flatnonzero(conv > 0.5)
    else:
        base = np.zeros(span_big, dtype=bool)
        base[xo] = True
        bits = np.zeros(span, dtype=bool)
        for s in yo.tolist():
            bits[s:s + span_big] |= base
        idx = np.flatnonzero(bits)
    if len(idx) > max_size:
        return None
    return idx.astype(np.int64) + (x0 + y0)


def sparse_combine(x, y, op, max_size):
    if len(x) < len(y):
        x, y = y, x
    outer = np.add.outer if op == ADD else np.multiply.outer
    rows = max(1, _CHUNK // len(x))
    acc = np.empty(0, dtype=np.int64)
    pending = []
    pending_len = 0
    for i in range(0, len(y), rows):
        block = np.unique(outer(y[i:i + rows], x).ravel())
        pending.append(block)
        pending_len += len(block)
        if pending_len > 4 * len(acc) + _CHUNK:
            acc = np.unique(np.concatenate([acc] + pending))
            pending, pending_len = [], 0
            if len(acc) > max_size:
                return None
    if pending:
        acc = np.unique(np.concatenate([acc] + pending))
    if len(acc) > max_size:
        return None
    return acc.astype(np.int64)


def rep_count(x, t):
    """Number of ordered pairs (a, b) in x*x with a - b == t."""
    shifted = x + t
    pos = np.searchsorted(x, shifted)
    pos[pos == len(x)] = 0
    return int(np.count_nonzero(x[pos] == shifted))
