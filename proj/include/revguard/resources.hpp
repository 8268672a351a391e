#pragma once

#include <filesystem>
#include <memory>

#include "revguard/tagger.hpp"
#include "revguard/thesaurus.hpp"

namespace revguard {

/// Location of the shipped data files: $REVGUARD_DATA_DIR when set,
/// otherwise the directory configured at build time.
std::filesystem::path default_data_dir();

struct Resources {
    std::shared_ptr<const Tagger> tagger;
    std::shared_ptr<const Thesaurus> thesaurus;
};

/// Loads the tagger model (memoised) and the thesaurus from `data_dir`.
/// An empty `overlay` selects `thesaurus/overlay.txt` when present.
Resources load_resources(const std::filesystem::path& data_dir, const std::filesystem::path& overlay = {});

}  // namespace revguard
