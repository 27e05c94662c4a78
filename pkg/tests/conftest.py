import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from thermoband.cell_problems import perturbation_set  # noqa: E402
from thermoband.effective import compute_effective  # noqa: E402
from thermoband.material import (  # noqa: E402
    FIG2_GROUPS, FIG4_GROUPS, FIG6_GROUPS, DimensionlessGroups, fig5_groups, fig8_groups,
    from_ratios,
)

# a generic set with every contrast active and unequal layers
GENERIC_GROUPS = DimensionlessGroups(
    p_ratio=1.7, c_ratio=5.0, rho_ratio=0.3, k_ratio=0.4, alpha1_group=0.02,
    alpha2_group=0.05, k1_group=0.8, p1_group=1.3, tau0_group=0.5, tau1_group=0.7,
    tau0_ratio=1.5, tau1_ratio=0.5, nu1=0.1, nu2=0.35, eta=2.5,
)

GROUP_SETS = {
    "fig2": FIG2_GROUPS,
    "fig4": FIG4_GROUPS,
    "fig5": fig5_groups(),
    "fig6": FIG6_GROUPS,
    "fig8_tau1": fig8_groups(1.0),
    "generic": GENERIC_GROUPS,
}


@functools.lru_cache(maxsize=None)
def cell_of(name):
    return from_ratios(GROUP_SETS[name])


@functools.lru_cache(maxsize=None)
def pset_of(name):
    return perturbation_set(cell_of(name))


@functools.lru_cache(maxsize=None)
def tensors_of(name):
    return compute_effective(cell_of(name), pset_of(name))


@pytest.fixture(params=sorted(GROUP_SETS))
def set_name(request):
    return request.param


def homogeneous_cell(**over):
    groups = DimensionlessGroups(alpha1_group=0.05, alpha2_group=0.05, tau0_group=0.3,
                                 tau1_group=0.6, nu1=0.25, nu2=0.25, eta=1.0)
    from dataclasses import replace
    return from_ratios(replace(groups, **over))
