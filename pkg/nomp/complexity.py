# nomp/complexity.py
"""Closed-form coarse-search complexity, in atom evaluations."""


def _grid_ris(nomp_cfg, element_count):
    return nomp_cfg.oversampling_v * nomp_cfg.oversampling_h * element_count


def default_path_counts(cfg):
    """(L_ur + 1, L_rb) per RIS."""
    return [(n_ur + 1, n_rb) for n_ur, n_rb in zip(cfg.nlos_ur, cfg.nlos_rb)]


def complexity(cfg, nomp_cfg, path_counts=None):
    """Full extraction: sum_k eta_v eta_h M_k ((L_ur+1) eta_u N_u + L_rb eta_b N_b)."""
    path_counts = default_path_counts(cfg) if path_counts is None else path_counts
    total = 0
    for m, (n_ur, n_rb) in zip(cfg.ris_element_counts, path_counts):
        total += _grid_ris(nomp_cfg, m) * (
            n_ur * nomp_cfg.oversampling_ue * cfg.n_ue + n_rb * nomp_cfg.oversampling_bs * cfg.n_bs
        )
    return int(total)


def proposed_complexity(cfg, nomp_cfg, rounds):
    """One UE-RIS search per round and RIS, capped at L_ur + 1, plus one
    BS-side LoS confirmation search per RIS."""
    if isinstance(rounds, int):
        rounds = [rounds] * cfg.num_ris
    total = 0
    for m, n_ur, r in zip(cfg.ris_element_counts, cfg.nlos_ur, rounds):
        total += _grid_ris(nomp_cfg, m) * (
            min(r, n_ur + 1) * nomp_cfg.oversampling_ue * cfg.n_ue + nomp_cfg.oversampling_bs * cfg.n_bs
        )
    return int(total)


def equal_parameter_complexity(num_ris, elements, eta, ur_paths, rb_paths, n_ue, n_bs):
    """K M eta^3 (L_ur N_u + L_rb N_b), with ``ur_paths`` already counting the LoS path."""
    return int(num_ris * elements * eta ** 3 * (ur_paths * n_ue + rb_paths * n_bs))


def complexity_ratio(ur_paths, rb_paths, n_ue, n_bs):
    """Baseline over first-round proposed complexity."""
    return (ur_paths * n_ue + rb_paths * n_bs) / (n_ue + n_bs)
