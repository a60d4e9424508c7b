# Brute-force oracles
