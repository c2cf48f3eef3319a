#pragma once

#include <string>
#include <vector>

#include "phylocompat/character.hpp"
#include "phylocompat/tree.hpp"

namespace phylocompat {

/// The counterexample family on 2n taxa a1..an, b1..bn: 2n-4 characters
/// Omega_A, chi_2..chi_{n-2}, phi_3..phi_{n-1}, Omega_B, in that order.
/// Every proper subset is compatible while the whole set is not.
struct FamilyInstance {
  int n = 0;
  CharacterMatrix matrix;

  const TaxonSet& taxa() const { return matrix.taxa(); }
  std::size_t omega_a() const { return 0; }
  std::size_t chi(int j) const;
  std::size_t phi(int j) const;
  std::size_t omega_b() const { return matrix.size() - 1; }
};

/// Builds C(n) for even n >= 4. At n = 4 this is the eight-taxon example.
FamilyInstance counterexample(int n);

/// Lobster trees. Internal vertices are named u1.., v1.., uA, uB.
Tree lobster_a(int n);
Tree lobster_b(int n);
/// A restricted to X_le(i) glued to B restricted to X_ge(i+1); 2 <= i <= n-2.
Tree lobster_a_cross_b(int n, int i);
/// A_{i-1}B with one leaf pair exchanged; 3 <= i <= n-1.
Tree lobster_a_jagged_b(int n, int i);

/// Builds characters column-wise from aligned sequences; equal letters
/// share a state.
CharacterMatrix matrix_from_sequences(const std::vector<std::string>& taxa,
                                      const std::vector<std::string>& sequences);

/// Five taxa x1..x5 with sequences AAA, ACC, CGC, CCG, GAG.
CharacterMatrix fitch_example();

/// Adds `copies` fresh taxa that share every state of `taxon` (gapped where
/// it is gapped). New labels are `<taxon>_dup<k>`.
CharacterMatrix duplicate_taxon(const CharacterMatrix& matrix, std::string_view taxon,
                                int copies);

/// Replaces every singleton state by a gap.
CharacterMatrix gapify(const CharacterMatrix& matrix);

}  // namespace phylocompat
