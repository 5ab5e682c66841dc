import logging
import sys

FORMAT = "[%(asctime)s] [Experiments] [%(levelname)s] %(message)s"
DATEFMT = "%Y-%m-%d %H:%M:%S %z"


def init_logging(level: str = "INFO") -> None:
    """
    Attach a single stdout handler to the root logger. Safe to call repeatedly; a
    later call moves the existing handler to the new level.
    """
    root = logging.getLogger()
    root.setLevel(level)
    tagged = [h for h in root.handlers if getattr(h, "_abstain_al", False)]
    if tagged:
        for handler in tagged:
            handler.setLevel(level)
        return

    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FORMAT, datefmt=DATEFMT))
    handler._abstain_al = True
    root.addHandler(handler)
