# Hashes into sign/ternary vectors and exceptional sets
