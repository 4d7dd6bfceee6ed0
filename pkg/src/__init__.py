# Well-balanced fifth-order A-WENO solver for balance laws
