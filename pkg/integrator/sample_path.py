"""
Cadlag sample paths on a jump-augmented grid.
"""
import csv
from dataclasses import dataclass

import numpy as np

from errors import ArgumentError
import norms


def augmented_grid(grid, jump_times):
    """
    Merge a time grid with jump times.

    Returns:
        Tuple ``(times, is_jump)``: the sorted union of nodes, and a mask
        flagging nodes that carry at least one jump.
    """
    grid = np.asarray(grid, dtype=float)
    jump_times = np.asarray(jump_times, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0 \
            or np.any(np.diff(grid) <= 0):
        raise ArgumentError('grid must increase strictly from 0')
    if jump_times.size and jump_times[-1] > grid[-1]:
        raise ArgumentError('jump after the end of the grid')

    times = np.union1d(grid, jump_times)
    is_jump = np.isin(times, jump_times)
    return times, is_jump


def uniform_grid(T, n_steps):
    if not T > 0 or n_steps < 1:
        raise ArgumentError('need T > 0 and n_steps >= 1')
    return np.linspace(0.0, T, n_steps + 1)


def jumps_at_nodes(times, jump_times, jumps):
    """Sum per-event jump vectors onto the nodes holding their times."""
    out = np.zeros((times.shape[0], jumps.shape[1]))
    if jump_times.size:
        np.add.at(out, np.searchsorted(times, jump_times), jumps)
    return out


@dataclass(frozen=True, eq=False)
class SamplePath:
    """
    Attributes:
        times: ``(N,)`` nodes, including every jump time.
        values: ``(N, dim)`` values :math:`X_t` at the nodes.
        left_limits: ``(N, dim)`` left limits :math:`X_{t-}`; equal to
            ``values`` away from jump nodes, and to ``values[0]`` at 0.
        is_jump: ``(N,)`` mask of nodes carrying a jump.
    """
    times: np.ndarray
    values: np.ndarray
    left_limits: np.ndarray
    is_jump: np.ndarray

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def final(self):
        return self.values[-1]

    @property
    def jumps(self):
        return self.values - self.left_limits

    def sup(self, space):
        """:math:`\\sup_t |X_t|` over nodes and their left limits."""
        return float(max(
            np.max(norms.norm(space, self.values)),
            np.max(norms.norm(space, self.left_limits))
        ))

    def continuous_variation(self, space):
        """
        Largest continuous move :math:`|X_{t_{j+1}-} - X_{t_j}|` between
        consecutive nodes. Large values mean the supremum between nodes is
        under-resolved.
        """
        if self.times.size < 2:
            return 0.0
        moves = self.left_limits[1:] - self.values[:-1]
        return float(np.max(norms.norm(space, moves)))

    def at(self, t):
        """
        Right-continuous evaluation, linear between nodes in the
        continuous part.
        """
        if not self.times[0] <= t <= self.times[-1]:
            raise ArgumentError('time {} outside the path'.format(t))
        j = int(np.searchsorted(self.times, t, side='right')) - 1
        if self.times[j] == t or j == self.times.size - 1:
            return self.values[j].copy()

        t0, t1 = self.times[j], self.times[j + 1]
        w = (t - t0) / (t1 - t0)
        return (1 - w) * self.values[j] + w * self.left_limits[j + 1]

    def to_csv(self, path):
        """Columns: ``t, x_0.., left_0.., is_jump``."""
        d = self.dim
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(
                ['t'] + ['x_{}'.format(i) for i in range(d)]
                + ['left_{}'.format(i) for i in range(d)] + ['is_jump']
            )
            for t, v, left, jump in zip(
                self.times, self.values, self.left_limits, self.is_jump
            ):
                writer.writerow(
                    [repr(float(t))] + [repr(float(x)) for x in v]
                    + [repr(float(x)) for x in left] + [int(jump)]
                )


def from_increments(times, is_jump, continuous, jumps, x0=None):
    """
    Accumulate a path from per-node continuous increments and jumps with
    a running sum, so paths built from the same increments agree exactly.
    """
    steps = continuous + jumps
    if x0 is not None:
        steps = steps.copy()
        steps[0] += x0
    values = np.cumsum(steps, axis=0)
    return SamplePath(
        times=times, values=values, left_limits=values - jumps,
        is_jump=is_jump
    )
