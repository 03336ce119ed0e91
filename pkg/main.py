import logging
import sys

from dotenv import load_dotenv

from src.presentation.cli.commands import run
from src.presentation.cli.config import Settings

# 環境変数をロード
load_dotenv()


def main() -> None:
    settings = Settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
