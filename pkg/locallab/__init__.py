# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import os
import subprocess

from locallab.__about__ import __version__ as _static_version

BASE_DIR = os.path.abspath(os.path.dirname(__file__))


def _git_version() -> str:
    try:
        return (
            subprocess.run(
                ["git", "-C", BASE_DIR, "describe", "--tags"],
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
            )
            .stdout.decode()
            .strip()
        )
    except OSError:
        return ""


__version__ = os.environ.get("PKGVER") or _git_version() or _static_version
