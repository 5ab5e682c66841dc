from typing import Tuple

import numpy as np


def trial_streams(seed: int, trial: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """
    Independent (oracle, learner) generators for one trial. They depend only on
    (seed, trial), so results do not depend on which worker runs the trial.
    """
    oracle_seq, learner_seq = np.random.SeedSequence([seed, trial]).spawn(2)
    return np.random.default_rng(oracle_seq), np.random.default_rng(learner_seq)


def estimate_stream(seed: int) -> np.random.Generator:
    """Generator for drawing estimation pools."""
    return np.random.default_rng(np.random.SeedSequence([seed, 0xE5]))
