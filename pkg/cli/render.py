"""
Plain-text summary printed after a run.
"""


def _num(value):
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return '{:.4g}'.format(value)
    return str(value)


def _table(header, rows):
    cells = [list(map(_num, header))] + [list(map(_num, r)) for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for j, row in enumerate(cells):
        lines.append('  '.join(c.ljust(w) for c, w in zip(row, widths)))
        if j == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines)


def _small_p_bound(reports):
    # counting_r and compensator_r bound the same side, the tighter one counts
    bounds = [v.rhs.value for report in reports for v in report.variants
              if report.name.startswith('small_p.')
              and v.label in ('counting_r', 'compensator_r')]
    return min(bounds) if bounds else None


def _inequality_lines(report):
    rows = []
    for v in report.variants:
        rows.append((report.name, v.label, v.lhs.value, v.rhs.value,
                     v.ratio.value, v.ratio.se, v.verdict.constant,
                     v.verdict.status))
    out = [_table(('report', 'variant', 'lhs', 'rhs', 'ratio', 'se',
                   'constant', 'status'), rows)]
    for warning in report.warnings:
        out.append('warning: ' + warning)
    for companion in report.companions:
        out.extend(_inequality_lines(companion))
    return out


def _tail_lines(report):
    rows = [(r.R, r.hits, r.probability, r.wilson_low, r.wilson_high,
             r.bound, r.status) for r in report.rows]
    return [
        'lambda {}  M_lambda {}  C_lambda {}'.format(
            _num(report.lam), _num(report.m_lambda), _num(report.c_lambda)
        ),
        _table(('R', 'hits', 'p', 'low', 'high', 'bound', 'status'), rows),
    ]


def render(outcome):
    """The console summary of an :class:`Outcome`."""
    lines = ['{}: {}'.format(outcome.kind, outcome.payload.get('verdict'))]
    for report in outcome.reports:
        if hasattr(report, 'variants'):
            lines.extend(_inequality_lines(report))
        elif hasattr(report, 'rows'):
            lines.extend(_tail_lines(report))
    inequality_reports = [r for r in outcome.reports if hasattr(r, 'variants')]
    bound = _small_p_bound(inequality_reports)
    if bound is not None:
        lines.append('tightest small-moment bound: {}'.format(_num(bound)))
    if not outcome.reports:
        lines.append(_table(
            ('quantity', 'value'),
            [(k, v) for k, v in outcome.summary.items() if k != 'verdict']
        ))
    return '\n'.join(lines)
