"""Analysis tools for differentially private noise-addition mechanisms."""
