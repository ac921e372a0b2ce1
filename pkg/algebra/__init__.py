# Algebra module for exact ring arithmetic and small matrices
