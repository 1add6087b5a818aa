"""SDPA sparse (``.dat-s``) reading and writing.

SDPA's primal form is ``min c^T x`` s.t. ``sum_i F_i x_i - F_0 >= 0``, so a
block ``const + sum_i x_i C_i`` is written with ``F_0 = -const``.  All 1x1
blocks are merged into one diagonal block (negative size in the block
structure line).  Equalities are written as pairs of opposite diagonal
entries at the end of that block.  A leading comment line records the
objective sense, the objective constant and the number of equality pairs so
that reading back reproduces the problem exactly; files without that line
are read as plain SDPA data.
"""

import re

import numpy as np

from .errors import ParseError
from .lmi import AffineMatrixMap, AffineScalar, SdpProblem

_HEADER = "*hypercone"


def to_sdpa(problem):
    """Serialize an :class:`SdpProblem` to SDPA sparse text."""
    m = problem.nvars
    big = [b for b in problem.psd_blocks if b.dim > 1]
    lp = [b.entry(0, 0) for b in problem.psd_blocks if b.dim == 1]
    for e in problem.equalities:
        lp.extend([e, -e])
    sign = -1.0 if problem.sense == "max" else 1.0
    c = np.zeros(m)
    for i, v in problem.objective.coeffs.items():
        c[i] = sign * v
    dims = [b.dim for b in big] + ([-len(lp)] if lp else [])

    lines = ['"SDPA sparse data written by hypercone',
             f"{_HEADER} sense={problem.sense} offset={problem.objective.const!r} "
             f"equalities={len(problem.equalities)}",
             str(m), str(len(dims)), " ".join(str(d) for d in dims),
             " ".join(repr(float(v)) for v in c)]

    def emit(mat, blk, M, diag_only=False):
        n = M.shape[0]
        for i in range(n):
            for j in range(i, n):
                if diag_only and i != j:
                    continue
                if M[i, j] != 0.0:
                    lines.append(f"{mat} {blk} {i + 1} {j + 1} {float(M[i, j])!r}")

    for bi, b in enumerate(big, start=1):
        emit(0, bi, -b.const)
        for v in sorted(b.coeffs):
            emit(v + 1, bi, b.coeffs[v])
    if lp:
        bi = len(big) + 1
        for r, s in enumerate(lp, start=1):
            if s.const != 0.0:
                lines.append(f"0 {bi} {r} {r} {-s.const!r}")
        for r, s in enumerate(lp, start=1):
            for v in sorted(s.coeffs):
                if s.coeffs[v] != 0.0:
                    lines.append(f"{v + 1} {bi} {r} {r} {s.coeffs[v]!r}")
    return "\n".join(lines) + "\n"


def _tokens(text):
    """Yield ``(token, lineno)`` after the comment header, plus the header meta."""
    meta = {}
    toks = []
    started = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not started and (stripped.startswith('"') or stripped.startswith("*")):
            if stripped.startswith(_HEADER):
                for key, val in re.findall(r"(\w+)=(\S+)", stripped):
                    meta[key] = val
            continue
        if stripped:
            started = True
        # trailing annotations such as "2 =mdim" are comments
        stripped = re.split(r'[="*]', stripped, maxsplit=1)[0]
        for tok in re.split(r"[\s,{}()]+", stripped):
            if tok:
                toks.append((tok, lineno))
    return toks, meta


def from_sdpa(text):
    """Parse SDPA sparse text into an :class:`SdpProblem`."""
    toks, meta = _tokens(text)
    pos = 0

    def take(kind, what):
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1][1] if toks else 0
            raise ParseError(f"unexpected end of file while reading {what}", last)
        tok, lineno = toks[pos]
        pos += 1
        try:
            return kind(tok), lineno
        except ValueError:
            try:
                if kind is int and float(tok) == int(float(tok)):
                    return int(float(tok)), lineno
            except ValueError:
                pass
            raise ParseError(f"malformed {what}: {tok!r}", lineno) from None

    m, _ = take(int, "number of variables")
    nblocks, ln = take(int, "number of blocks")
    if m < 0 or nblocks < 0:
        raise ParseError("negative counts", ln)
    dims = []
    for _ in range(nblocks):
        d, ln = take(int, "block structure entry")
        if d == 0:
            raise ParseError("zero block size", ln)
        dims.append(d)
    c = np.array([take(float, "objective coefficient")[0] for _ in range(m)])

    mats = [[np.zeros((abs(d), abs(d))) for d in dims] for _ in range(m + 1)]
    while pos < len(toks):
        mat, ln = take(int, "matrix number")
        blk, _ = take(int, "block number")
        i, _ = take(int, "row index")
        j, _ = take(int, "column index")
        v, _ = take(float, "entry value")
        if not 0 <= mat <= m:
            raise ParseError(f"matrix number {mat} out of range 0..{m}", ln)
        if not 1 <= blk <= nblocks:
            raise ParseError(f"block number {blk} out of range 1..{nblocks}", ln)
        d = abs(dims[blk - 1])
        if not (1 <= i <= d and 1 <= j <= d):
            raise ParseError(f"entry ({i}, {j}) outside block of size {d}", ln)
        if dims[blk - 1] < 0 and i != j:
            raise ParseError("off-diagonal entry in a diagonal block", ln)
        i, j = min(i, j), max(i, j)
        M = mats[mat][blk - 1]
        M[i - 1, j - 1] = M[j - 1, i - 1] = v

    sense = meta.get("sense", "min")
    offset = float(meta.get("offset", 0.0))
    neq = int(meta.get("equalities", 0))
    sign = -1.0 if sense == "max" else 1.0
    objective = AffineScalar.linear(range(m), sign * c, offset)

    blocks, equalities = [], []
    for bi, d in enumerate(dims):
        if d > 0:
            blk = AffineMatrixMap(d, -mats[0][bi], {})
            for v in range(m):
                if np.any(mats[v + 1][bi]):
                    blk.coeffs[v] = mats[v + 1][bi]
            blocks.append(blk)
            continue
        rows = []
        for r in range(-d):
            rows.append(AffineScalar.linear(
                [v for v in range(m) if mats[v + 1][bi][r, r] != 0.0],
                [mats[v + 1][bi][r, r] for v in range(m) if mats[v + 1][bi][r, r] != 0.0],
                -mats[0][bi][r, r]))
        nscalar = len(rows) - 2 * neq
        if nscalar < 0:
            raise ParseError("header declares more equalities than diagonal entries")
        blocks.extend(AffineMatrixMap.scalar(s) for s in rows[:nscalar])
        equalities.extend(rows[nscalar::2])
        neq = 0
    return SdpProblem(m, blocks, equalities, objective, sense)


def write_sdpa(problem, path):
    with open(path, "w") as fh:
        fh.write(to_sdpa(problem))


def read_sdpa(path):
    with open(path) as fh:
        return from_sdpa(fh.read())
