# CNF Game API backend
