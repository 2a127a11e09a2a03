# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from locallab.halfcol.friendly import friendly_windows
from locallab.halfcol.friendly import has_friendly_subpath
from locallab.halfcol.friendly import is_friendly
from locallab.halfcol.friendly import q_set
from locallab.halfcol.halflog import build_halflog
from locallab.halfcol.halflog import HalfLog
from locallab.halfcol.id_promise import algo_id_promise
from locallab.halfcol.id_promise import DeclineState
from locallab.halfcol.id_promise import IdPromise
from locallab.halfcol.known_n import algo_known_n
from locallab.halfcol.known_n import KnownN
from locallab.halfcol.randomized import algo_rand_k2
from locallab.halfcol.randomized import algo_rand_k3
from locallab.halfcol.randomized import RandK2
from locallab.halfcol.randomized import RandK3
from locallab.halfcol.run import HalfColResult
from locallab.halfcol.verify import verify_halfcol

__all__ = [
    "algo_id_promise",
    "algo_known_n",
    "algo_rand_k2",
    "algo_rand_k3",
    "build_halflog",
    "DeclineState",
    "friendly_windows",
    "HalfColResult",
    "HalfLog",
    "has_friendly_subpath",
    "IdPromise",
    "is_friendly",
    "KnownN",
    "q_set",
    "RandK2",
    "RandK3",
    "verify_halfcol",
]
