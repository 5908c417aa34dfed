"""Published values used as acceptance targets.

Keys are (strategy, buffered).  Length-3 entries are per single ship.
"""

STRATEGIES = ("completely-random", "regular", "diagonal", "smart-diagonal")

# hit-order probabilities and pi: (p1 L2, L3, L5), (p12 L2, L3, L5), pi_ave, pi_max
HIT_ORDER = {
    ("completely-random", True): ((0.154, 0.231, 0.385), (0.342, 0.486, 0.685), 0.123, 0.159),
    ("regular", True): ((0.146, 0.237, 0.379), (0.346, 0.516, 0.622), 0.080, 0.118),
    ("diagonal", True): ((0.121, 0.207, 0.465), (0.220, 0.385, 0.662), 0.045, 0.103),
    ("smart-diagonal", True): ((0.108, 0.201, 0.490), (0.220, 0.385, 0.662), 0.147, 0.150),
    ("completely-random", False): ((0.154, 0.231, 0.385), (0.342, 0.486, 0.685), 0.123, 0.159),
    ("regular", False): ((0.167, 0.249, 0.334), (0.390, 0.519, 0.571), 0.125, 0.146),
    ("diagonal", False): ((0.125, 0.210, 0.455), (0.224, 0.378, 0.665), 0.102, 0.146),
    ("smart-diagonal", False): ((0.122, 0.213, 0.452), (0.224, 0.378, 0.665), 0.0095, 0.140),
}

# the no-buffer smart-diagonal pi_ave is read as 0.095 (0.0095 looks like a dropped digit)
PI_AVE_TYPO = {("smart-diagonal", False): 0.095}

# elimination probabilities: (L2, L3, L5) given pi_ave, then given pi_max
ELIMINATION = {
    ("completely-random", True): ((0.239, 0.344, 0.511), (0.236, 0.340, 0.504)),
    ("regular", True): ((0.238, 0.362, 0.476), (0.236, 0.359, 0.473)),
    ("diagonal", True): ((0.164, 0.286, 0.540), (0.161, 0.281, 0.529)),
    ("smart-diagonal", True): ((0.158, 0.282, 0.550), (0.156, 0.278, 0.539)),
    ("completely-random", False): ((0.239, 0.344, 0.511), (0.236, 0.340, 0.505)),
    ("regular", False): ((0.268, 0.369, 0.432), (0.266, 0.366, 0.428)),
    ("diagonal", False): ((0.169, 0.283, 0.537), (0.166, 0.279, 0.527)),
    ("smart-diagonal", False): ((0.167, 0.285, 0.537), (0.164, 0.281, 0.527)),
}

# shots to first hit / to a second ship: (mean, median, max) for t1 then t2
HUNT_TIMES = {
    ("completely-random", True): ((4.6, 4, 44), (10.5, 9, 53)),
    ("regular", True): ((4.9, 3, 39), (12.4, 11, 47)),
    ("diagonal", True): ((4.0, 3, 12), (8.3, 8, 23)),
    ("smart-diagonal", True): ((3.6, 3, 12), (7.8, 7, 23)),
    ("completely-random", False): ((4.6, 3, 42), (10.5, 9, 54)),
    ("regular", False): ((5.7, 3, 39), (14.9, 13, 47)),
    ("diagonal", False): ((3.9, 3, 12), (8.1, 8, 23)),
    ("smart-diagonal", False): ((3.5, 3, 12), (7.6, 7, 23)),
}
