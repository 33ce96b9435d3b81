#pragma once

#include <cstdint>

#include "biotab/table.hpp"

namespace biotab {

/// Shape of a generated sample corpus. Rows within a table draw their
/// symptoms and signs from a small shared per-table pool, so rows overlap the
/// way differential-diagnosis tables do.
struct SynthConfig {
    std::size_t n_tables = 20;
    std::size_t rows_min = 3;
    std::size_t rows_max = 6;
    std::size_t symptoms_min = 2;
    std::size_t symptoms_max = 6;
    std::size_t signs_min = 1;
    std::size_t signs_max = 4;
    std::uint64_t seed = 0;
};

/// Phrases never contain commas or the words "and", "but", "no", "not", so
/// every rendered question parses back unambiguously.
Corpus synthesize_corpus(const SynthConfig& config);

}  // namespace biotab
