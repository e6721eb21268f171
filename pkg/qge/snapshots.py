"""
Field snapshots as raw little-endian arrays with a JSON header.

For each field ``name`` the file ``<name>.bin`` holds complex128 values
(``<c16``) of shape ``(snapshots, n, n)`` in C order, indexed
``[snapshot, i, j]`` where row ``i`` and column ``j`` are wavevector
components ``k1 = fftfreq(n, 1/n)[i]`` and ``k2 = fftfreq(n, 1/n)[j]``.
Coefficients are normalized so that
:math:`f(x) = \\sum_k \\hat f_k e^{ik\\cdot x}` on :math:`[0, 2\\pi)^2`.
"""
import json
import os

import numpy as np

from errors import ArgumentError
from log import log

HEADER = 'snapshots.json'
FIELDS = ('theta', 'y', 'z')


def snapshot_indices(m, count):
    """``count`` grid positions spread evenly over ``m``, last included."""
    if count < 1:
        raise ArgumentError('need at least one snapshot')
    count = min(count, m)
    return np.unique(np.round(np.linspace(0, m - 1, count)).astype(int))


def write_snapshots(run, directory, count=5):
    """
    Write ``theta``, ``y`` and ``z`` at ``count`` times and the header.

    Returns:
        List of written paths, header last.
    """
    os.makedirs(directory, exist_ok=True)
    index = snapshot_indices(run.times.size, count)
    paths = {
        'theta': run.theta.coeffs,
        'y': run.y.coeffs,
        'z': run.z.restrict(run.times).coeffs,
    }

    written = []
    for name in FIELDS:
        target = os.path.join(directory, name + '.bin')
        np.ascontiguousarray(paths[name][index]).astype('<c16').tofile(target)
        written.append(target)

    n = run.theta.n
    header = {
        'dtype': '<c16',
        'endianness': 'little',
        'order': 'C',
        'layout': ['snapshot', 'k1', 'k2'],
        'shape': [int(index.size), n, n],
        'k_order': [int(k) for k in np.fft.fftfreq(n, 1.0 / n)],
        'normalization': 'f(x) = sum_k c_k exp(i k.x) on [0, 2pi)^2',
        'times': [float(run.times[i]) for i in index],
        'fields': {name: name + '.bin' for name in FIELDS},
    }
    target = os.path.join(directory, HEADER)
    with open(target, 'w') as f:
        json.dump(header, f, indent=2, sort_keys=True)
        f.write('\n')
    written.append(target)

    log('qge', 'wrote {} snapshots to {}'.format(index.size, directory))
    return written


def read_snapshots(directory):
    """
    Returns:
        Tuple ``(header, fields)`` with ``fields[name]`` the coefficient
        array described by the header.
    """
    with open(os.path.join(directory, HEADER)) as f:
        header = json.load(f)
    fields = {}
    for name, filename in header['fields'].items():
        raw = np.fromfile(os.path.join(directory, filename),
                          dtype=np.dtype(header['dtype']))
        fields[name] = raw.reshape(header['shape'])
    return header, fields
