#pragma once

namespace subred {

/// chi^2 between the planted-submatrix mixture over all k-subsets S (block
/// S x S of Bern(p), the rest Bern(q)) and the null Bern(q) product,
/// by enumerating all 2^(n^2) binary matrices. Requires n <= 4.
double chi2_matrix_mixture_brute(int n, int k, double p, double q);

/// chi^2 between the uniformly planted vector law (k coordinates Bern(p),
/// the rest Bern(q)) and Bern(q)^m, by enumerating all 2^m vectors.
/// Requires m <= 20.
double chi2_vector_mixture_brute(int m, int k, double p, double q);

}  // namespace subred
