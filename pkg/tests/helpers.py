"""Independent point-by-point reimplementation of the round geometry and
selection rules, in plain Python loops.  Used to cross-check the vectorized
implementation; kept deliberately free of any code sharing with it."""

import numpy as np

from safebo.msafeopt import EXPANDER, MAXIMIZER, Mode


def brute_force_round(field_f, field_g, config, surviving_prev=None):
    """Return a dict with every geometric object of one round, or None when
    no action is eligible."""
    grid = field_f.grid
    n_s, n_x = grid.shape
    h = config.threshold
    s_values = grid.s_values

    safe = set()
    for j in range(n_x):
        safe.add((0, j))
        for i in range(n_s):
            if field_g.ucb[i, j] <= h:
                safe.add((i, j))
    best_lcb = max(field_f.lcb[i, j] for (i, j) in safe)

    if surviving_prev is None:
        surviving_prev = [True] * n_x
    candidates = [True] * n_x if config.robust_elim else list(surviving_prev)

    boundary = []
    optimistic = []
    reach = []
    max_ucb_below = []
    max_lcb_below = []
    for j in range(n_x):
        b = 0
        for i in range(n_s):
            if field_g.ucb[i, j] <= h:
                b = i
        boundary.append(b)
        s_b = s_values[b]
        opt = min(1.0, s_b + max(0.0, h - field_g.lcb[b, j]) / config.min_growth_g)
        optimistic.append(opt)
        reach.append(field_f.ucb[b, j] + config.max_growth_f * (opt - s_b))
        max_ucb_below.append(max(field_f.ucb[i, j] for i in range(b + 1)))
        max_lcb_below.append(max(field_f.lcb[i, j] for i in range(b + 1)))

    surviving = []
    for j in range(n_x):
        if not candidates[j]:
            surviving.append(False)
            continue
        if config.mode is Mode.GLOBAL:
            elim = max_ucb_below[j] < best_lcb and reach[j] <= best_lcb
        elif config.mode is Mode.MONOTONE:
            elim = reach[j] <= best_lcb
        else:
            elim = False
        surviving.append(not elim)

    expanders = set()
    for j in range(n_x):
        if not surviving[j]:
            continue
        if config.mode is Mode.GLOBAL:
            expd = reach[j] > best_lcb
        elif config.mode is Mode.PER_X:
            expd = reach[j] > max_lcb_below[j]
        elif config.mode is Mode.MONOTONE:
            expd = True
        else:
            expd = boundary[j] < n_s - 1
        if expd:
            expanders.add((boundary[j], j))

    maximizer = []
    for j in range(n_x):
        source = field_g.ucb if config.mode is Mode.MSAFEUCB else field_f.ucb
        best_i, best_v = 0, source[0, j]
        for i in range(1, boundary[j] + 1):
            if source[i, j] > best_v:
                best_i, best_v = i, source[i, j]
        maximizer.append(best_i)
    maximizers = set()
    if config.mode in (Mode.GLOBAL, Mode.PER_X):
        maximizers = {(maximizer[j], j) for j in range(n_x) if surviving[j]}

    if not expanders and not maximizers:
        return None

    def acq_at(i, j):
        bf = field_f.beta * field_f.sigma[i, j]
        bg = field_g.beta * field_g.sigma[i, j]
        if (i, j) in expanders:
            if config.mode is Mode.MSAFEUCB:
                return bg
            if config.refined_acq:
                return max(bf, (config.max_growth_f / config.min_growth_g) * bg)
            return max(bf, bg)
        if (i, j) in maximizers:
            return bf
        return 0.0

    selected = None
    best = -np.inf
    for i in range(n_s):
        for j in range(n_x):
            if (i, j) not in expanders and (i, j) not in maximizers:
                continue
            v = acq_at(i, j)
            if v > best:
                best, selected = v, (i, j)
    origin = EXPANDER if selected in expanders else MAXIMIZER
    return dict(
        selected=selected,
        selected_from=origin,
        acq_value=best,
        surviving=surviving,
        boundary=boundary,
        optimistic=optimistic,
        maximizer=maximizer,
        expanders=expanders,
        maximizers=maximizers,
        acq_at=acq_at,
    )


def random_fields(rng, grid, beta_f=1.3, beta_g=0.9):
    from safebo import ConfidenceField

    shape = grid.shape
    ff = ConfidenceField.from_arrays(
        grid, rng.normal(size=shape), rng.uniform(0.05, 1.5, size=shape), beta_f
    )
    fg = ConfidenceField.from_arrays(
        grid, rng.normal(size=shape), rng.uniform(0.05, 1.5, size=shape), beta_g
    )
    return ff, fg
