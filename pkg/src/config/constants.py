"""
Project-wide constants: the sample-size constants of the epoch loop and the label
query subroutines, CSV schema lines, and terminal colors for component logging.
"""

# Unlabeled pool size n_k = 192 (256/eps_k)^2 (d ln(256/eps_k) + ln(288/delta_k))
POOL_FACTOR = 192
POOL_RATIO = 256
POOL_CONFIDENCE = 288

# Realizable label count m_k = 768 phi_k/eps_k (d ln(768 phi_k/eps_k) + ln(48/delta_k))
LABEL_RATIO = 768
LABEL_CONFIDENCE = 48

# Error budget handed to the predictor each epoch: eta = eps_k / 64
ETA_DIVISOR = 64

# Target excess error of the agnostic query: eps_k / (8 phi_k), confidence delta_k / 2
AGNOSTIC_EXCESS_DIVISOR = 8
AGNOSTIC_CONFIDENCE_DIVISOR = 2

# sigma(n, delta) = 8/n (2d ln(2en/d) + ln(24/delta))
SIGMA_FACTOR = 8
SIGMA_CONFIDENCE = 24

# Non-adaptive query size n = 6144/eps^2 (d ln(6144/eps^2) + ln(24/delta))
NONADAPTIVE_RATIO = 6144
NONADAPTIVE_CONFIDENCE = 24

# Abstention below this is treated as zero when deciding whether to query
PHI_FLOOR = 1e-12

# LP round-off allowed before a profile is rejected
CLAMP_LIMIT = 1e-7

# CSV schema header lines
EPOCHS_SCHEMA = "# schema: al-epochs v1"
TRIALS_SCHEMA = "# schema: al-trials v1"
ESTIMATE_SCHEMA = "# schema: al-estimate v1"
CURVE_SCHEMA = "# schema: al-curve v1"
PROFILE_SCHEMA = "# schema: al-profile v1"
ROUNDS_SCHEMA = "# schema: al-rounds v1"

ESTIMATE_COLUMNS = ["quantity", "r", "eta", "pool_size", "value", "stderr"]

# Foreground colors
RED = "\033[31m"
GREEN = "\033[32m"
YELLOW = "\033[33m"
BLUE = "\033[34m"
MAGENTA = "\033[35m"
CYAN = "\033[36m"
WHITE = "\033[37m"

# Background color
BG_BLACK = "\033[40m"
BG_BLUE = "\033[44m"

# Reset code to return to default color
RESET = "\033[0m"
