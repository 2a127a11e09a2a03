# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from locallab.rc.decompose import decompose_knuth_io
from locallab.rc.decompose import decompose_known_n
from locallab.rc.decompose import decompose_log
from locallab.rc.decompose import decompose_poly_n
from locallab.rc.decompose import DecompLabeling
from locallab.rc.decompose import DecompResult
from locallab.rc.primitives import compress
from locallab.rc.primitives import Layer
from locallab.rc.primitives import linial_distance_coloring
from locallab.rc.primitives import rake
from locallab.rc.primitives import Residual
from locallab.rc.primitives import ruling_set_on_path
from locallab.rc.verify import RcLclOutput
from locallab.rc.verify import to_rc_lcl
from locallab.rc.verify import verify_decomposition
from locallab.rc.verify import verify_rc_lcl

__all__ = [
    "compress",
    "decompose_knuth_io",
    "decompose_known_n",
    "decompose_log",
    "decompose_poly_n",
    "DecompLabeling",
    "DecompResult",
    "Layer",
    "linial_distance_coloring",
    "rake",
    "RcLclOutput",
    "Residual",
    "ruling_set_on_path",
    "to_rc_lcl",
    "verify_decomposition",
    "verify_rc_lcl",
]
