# Biliaison package: generalized divisors, Gorenstein liaison and the Gaeta chain
