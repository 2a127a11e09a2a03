# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import logging
import os

from rich.logging import RichHandler

try:
    from instance import config
except Exception:
    from instance import example as config


def configure_logging(level: str = config.LOG_LEVEL) -> None:
    """Route every locallab logger through a rich handler."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )


def thread_count(requested: int | None = None) -> int:
    """Worker cap: explicit request, then LOCALLAB_THREADS, then the default."""
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get("LOCALLAB_THREADS", "")
    if env.strip().isdigit() and int(env) > 0:
        return int(env)
    return config.DEFAULT_THREADS
