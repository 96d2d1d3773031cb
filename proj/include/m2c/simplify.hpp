#ifndef M2C_SIMPLIFY_HPP
#define M2C_SIMPLIFY_HPP

#include <cstdint>
#include <vector>

#include "m2c/cloud.hpp"

namespace m2c {

// Rewrites one fully-labeled Gold column into Silver classes. Most
// classes remap by table; Damper and Fire terminal points go to the
// nearer of their two candidate classes, measured point-to-point against
// the already-remapped fixed points of the same column. Ties and empty
// candidate sets fall to Clutter.
// Throws TaxonomyMismatch when the cloud is not Gold, UnlabeledPoint when
// the column has an UNLABELED entry.
std::vector<std::uint8_t> simplify_column(const LabeledCloud& cloud, LabelColumn which);

// Whole-cloud variant: the chosen column is simplified, the other column
// is cleared to UNLABELED (its Gold ids would be meaningless under
// Silver), and the result carries the Silver taxonomy.
LabeledCloud simplify_labels(const LabeledCloud& cloud, LabelColumn which);

} // namespace m2c

#endif
