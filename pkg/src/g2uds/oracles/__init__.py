"""Independent brute-force oracles, problem instances and security games."""
