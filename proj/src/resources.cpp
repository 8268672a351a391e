#include "revguard/resources.hpp"

#include <cstdlib>
#include <mutex>

namespace revguard {

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("REVGUARD_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return REVGUARD_DATA_DIR;
}

Resources load_resources(const std::filesystem::path& data_dir, const std::filesystem::path& overlay) {
    Resources r;
    auto tagger = std::make_shared<PerceptronTagger>(PerceptronTagger::load(data_dir / "tagger" / "en-perceptron.tsv.gz"));
    r.tagger = std::make_shared<MemoTagger>(std::move(tagger));
    std::filesystem::path ov = overlay;
    if (ov.empty() && std::filesystem::exists(data_dir / "thesaurus" / "overlay.txt")) {
        ov = data_dir / "thesaurus" / "overlay.txt";
    }
    r.thesaurus = Thesaurus::load(data_dir / "wordnet", ov);
    return r;
}

}  // namespace revguard
