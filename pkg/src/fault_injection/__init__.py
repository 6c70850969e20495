# Fault injection on the wire: bit flips, bad ternary codes, drops and truncation
