"""Exact cohomology, sheaf-character invariants and weak Brill-Noether
verdicts on rational surfaces."""

from .lattice import (
    DivisorClass,
    GENERAL,
    LatticeError,
    ParseError,
    PointConfig,
    QDivisor,
    SurfaceModel,
    basis_divisor,
    blowup_hirzebruch,
    blowup_p2,
    canonical,
    chi_line_bundle,
    collinear_config,
    del_pezzo,
    divisor,
    divisor_expr,
    explicit_config,
    hirzebruch,
    intersect,
    is_effective_hirzebruch,
    is_nef,
    neg_one_curves,
    parse_divisor,
    parse_surface,
    weyl_move_curve_to_last,
    weyl_orbit,
    weyl_reflect,
    zero_divisor,
)
from .cohomology import (
    CohomologyVector,
    Vanishing,
    VanishingVerdict,
    blowup_cohomology_oracle,
    hirzebruch_cohomology,
    hirzebruch_pushforward_oracle,
    interpolation_h0,
    vanishing_by_rules,
)
from .chern import (
    CharacterError,
    ChernCharacter,
    bogomolov_nonempty,
    character_from_chi,
    euler_pairing,
    hirzebruch_normalize,
    line_bundle_character,
    parse_character,
    riemann_roch_chi,
    serre_dual_character,
    twist_character,
    twisted_chi,
)
from .resolutions import (
    ExceptionalCollection,
    ResolutionError,
    ResolutionReport,
    blowup_hirzebruch_resolution,
    blowup_resolution,
    builtin_collection,
    hirzebruch_resolution,
    prioritary_hypotheses_check,
    solve_exponents,
    verify_strong_exceptional,
)
from .goodsums import (
    GoodSum,
    GoodSumError,
    WBNWitness,
    delpezzo_decompose,
    fiber_class,
    is_good_sum,
    prioritary_sum_check,
    rounding_sum,
    two_point_summand,
    upshift_lift,
    wbn_witness,
)
from .decide import (
    Obstruction,
    WBNStatus,
    WBNVerdict,
    blowup_hirzebruch_wbn,
    blowup_p2_wbn,
    delpezzo_wbn,
    hirzebruch_wbn,
    obstruction_certificate,
    rank_one_wbn,
    wbn,
)

__version__ = "0.1.0"
