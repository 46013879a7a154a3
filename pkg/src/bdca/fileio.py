"""Plain-text file formats for matrices, vectors, constraint sets, traces.

Matrix: first line "n", then n lines of n whitespace-separated reals.
Vector: first line "n", then n reals, one per line.
Constraint set: a tag line (box | orthant | simplex | halfspaces) followed by
the representation payload:

    box         n, then n lower bounds on one line, n upper bounds on one
                line ("-inf"/"inf" allowed)
    orthant     n
    simplex     n, then r
    halfspaces  "p n", then p rows of A (n reals each), then p lines of b

Trace CSV: header k,phi_x,phi_y,d_norm,lambda_k,trial_lambda,backtracks,
direction_feasible,elapsed_s with one row per iteration; reals carry 17
significant digits, the gate flag is 0/1.
"""

import csv

import numpy as np

from .constraints import Box, Halfspaces, NonnegOrthant, Simplex
from .model import as_symmetric_matrix

__all__ = (
    'FileFormatError',
    'read_matrix', 'write_matrix',
    'read_vector', 'write_vector',
    'read_constraints', 'write_constraints',
    'write_trace_csv', 'kkt_csv_fields',
    'fmt',
)


def fmt(x):
    """17-significant-digit decimal form, round-trip safe for float64."""
    return format(float(x), '.17g')


class FileFormatError(ValueError):
    pass


def _tokens(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    return lines


def _parse_real(tok, path, lineno):
    try:
        return float(tok)
    except ValueError:
        raise FileFormatError(
            f'{path}:{lineno}: expected a real number, got {tok!r}') from None


def _parse_count(tok, path, lineno):
    try:
        value = int(tok)
    except ValueError:
        raise FileFormatError(
            f'{path}:{lineno}: expected an integer, got {tok!r}') from None
    if value < 1:
        raise FileFormatError(f'{path}:{lineno}: dimension must be >= 1')
    return value


def read_matrix(path):
    """Read a symmetric matrix file (validated and symmetrized)."""
    lines = _tokens(path)
    if not lines:
        raise FileFormatError(f'{path}:1: empty file')
    n = _parse_count(lines[0].split()[0], path, 1)
    if len(lines) < n + 1:
        raise FileFormatError(f'{path}: expected {n} matrix rows, found {len(lines) - 1}')
    rows = []
    for i in range(n):
        toks = lines[1 + i].split()
        if len(toks) != n:
            raise FileFormatError(
                f'{path}:{2 + i}: expected {n} entries, found {len(toks)}')
        rows.append([_parse_real(t, path, 2 + i) for t in toks])
    return as_symmetric_matrix(np.array(rows))


def write_matrix(path, M):
    M = np.asarray(M, dtype=float)
    with open(path, 'w') as fh:
        fh.write(f'{M.shape[0]}\n')
        for row in M:
            fh.write(' '.join(fmt(v) for v in row) + '\n')


def read_vector(path):
    lines = _tokens(path)
    if not lines:
        raise FileFormatError(f'{path}:1: empty file')
    n = _parse_count(lines[0].split()[0], path, 1)
    if len(lines) < n + 1:
        raise FileFormatError(f'{path}: expected {n} entries, found {len(lines) - 1}')
    return np.array([_parse_real(lines[1 + i].split()[0], path, 2 + i)
                     for i in range(n)])


def write_vector(path, v):
    v = np.asarray(v, dtype=float)
    with open(path, 'w') as fh:
        fh.write(f'{v.shape[0]}\n')
        for x in v:
            fh.write(fmt(x) + '\n')


def read_constraints(path):
    """Read a constraint-set file; returns the matching ConstraintSet."""
    lines = _tokens(path)
    if not lines:
        raise FileFormatError(f'{path}:1: empty file')
    tag = lines[0].strip().lower()
    if tag == 'orthant':
        n = _parse_count(lines[1].split()[0], path, 2)
        return NonnegOrthant(n)
    if tag == 'simplex':
        n = _parse_count(lines[1].split()[0], path, 2)
        r = _parse_real(lines[2].split()[0], path, 3)
        return Simplex(n, r)
    if tag == 'box':
        n = _parse_count(lines[1].split()[0], path, 2)
        lower = [_parse_real(t, path, 3) for t in lines[2].split()]
        upper = [_parse_real(t, path, 4) for t in lines[3].split()]
        if len(lower) != n or len(upper) != n:
            raise FileFormatError(f'{path}: bounds must each have {n} entries')
        return Box(np.array(lower), np.array(upper))
    if tag == 'halfspaces':
        head = lines[1].split()
        if len(head) != 2:
            raise FileFormatError(f'{path}:2: expected "p n"')
        p = _parse_count(head[0], path, 2)
        n = _parse_count(head[1], path, 2)
        if len(lines) < 2 + p + p:
            raise FileFormatError(f'{path}: truncated halfspace payload')
        A = []
        for i in range(p):
            toks = lines[2 + i].split()
            if len(toks) != n:
                raise FileFormatError(
                    f'{path}:{3 + i}: expected {n} entries, found {len(toks)}')
            A.append([_parse_real(t, path, 3 + i) for t in toks])
        b = [_parse_real(lines[2 + p + i].split()[0], path, 3 + p + i)
             for i in range(p)]
        return Halfspaces(np.array(A), np.array(b))
    raise FileFormatError(f'{path}:1: unknown constraint tag {tag!r}')


def write_constraints(path, c):
    with open(path, 'w') as fh:
        if isinstance(c, NonnegOrthant):
            fh.write(f'orthant\n{c.n}\n')
        elif isinstance(c, Simplex):
            fh.write(f'simplex\n{c.n}\n{fmt(c.radius)}\n')
        elif isinstance(c, Box):
            fh.write(f'box\n{c.n}\n')
            fh.write(' '.join(fmt(v) for v in c.lower) + '\n')
            fh.write(' '.join(fmt(v) for v in c.upper) + '\n')
        elif isinstance(c, Halfspaces):
            fh.write(f'halfspaces\n{c.n_rows} {c.n}\n')
            for row in c.A:
                fh.write(' '.join(fmt(v) for v in row) + '\n')
            for v in c.b:
                fh.write(fmt(v) + '\n')
        else:
            raise TypeError(f'cannot serialize constraint set {type(c).__name__}')


TRACE_HEADER = ('k', 'phi_x', 'phi_y', 'd_norm', 'lambda_k', 'trial_lambda',
                'backtracks', 'direction_feasible', 'elapsed_s')


def write_trace_csv(path, records):
    """Write per-iteration records in the documented trace schema."""
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for r in records:
            writer.writerow([r.k, fmt(r.phi_x), fmt(r.phi_y), fmt(r.d_norm),
                             fmt(r.lambda_k), fmt(r.trial_lambda),
                             r.backtracks, int(r.direction_feasible),
                             fmt(r.elapsed)])


def kkt_csv_fields(report):
    """KKT report as CSV cells: three residuals, then multipliers joined
    with semicolons."""
    return [fmt(report.stationarity_residual),
            fmt(report.complementarity_residual),
            fmt(report.feasibility_violation),
            ';'.join(fmt(m) for m in report.multipliers)]
