# Modular and split decomposition
