"""Console entry point."""

import logging
import sys

from chibound.api.cli import main
from chibound.core.config import settings


def configure_logging() -> None:
    # Logs go to stderr; stdout carries only records
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def run() -> None:
    configure_logging()
    logging.getLogger(__name__).info(f"Starting {settings.app_name}")
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
