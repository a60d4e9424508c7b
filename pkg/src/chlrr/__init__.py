# LabG construction and the modified CHLRR decomposition
