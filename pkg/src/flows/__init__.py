# PocketFlow flow definitions
