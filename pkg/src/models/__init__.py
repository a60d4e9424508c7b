# Pydantic data models
