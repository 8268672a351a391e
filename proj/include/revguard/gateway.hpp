#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "revguard/corpus.hpp"
#include "revguard/resources.hpp"
#include "revguard/tagger.hpp"
#include "revguard/thesaurus.hpp"

namespace revguard {

enum class TemplateId { REGEN_ICLR, REGEN_NEURIPS, GEN_ICLR, GEN_NEURIPS, PARAPHRASE };
enum class Backend { REMOTE_API, MOCK };

std::string_view to_string(TemplateId t);
std::string_view to_string(Backend b);
TemplateId parse_template_id(std::string_view s);
Backend parse_backend(std::string_view s);

TemplateId regeneration_template(Venue venue);
TemplateId generation_template(Venue venue);

struct PromptTemplate {
    TemplateId id = TemplateId::PARAPHRASE;
    std::string system_text;
    std::string user_text;
    std::string placeholder;  // "[paper text]" or "[Review]"
};

struct RenderedPrompt {
    std::string system_text;
    std::string user_text;
};

/// Parses a template file: a "## system" section and a "## user" section.
PromptTemplate parse_prompt_template(TemplateId id, std::string_view body);
/// Loads `<TEMPLATE_ID>.txt` for every template id.
std::map<TemplateId, PromptTemplate> load_prompt_registry(const std::filesystem::path& dir);
/// Substitutes the input for the placeholder. Throws ConfigError when the
/// template has no placeholder.
RenderedPrompt render_prompt(const PromptTemplate& t, std::string_view input);

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
    std::size_t dim() const { return values.size(); }
};

struct GatewayConfig {
    Backend generation_backend = Backend::MOCK;
    Backend embedding_backend = Backend::MOCK;
    /// Empty keeps the cache in memory only.
    std::filesystem::path cache_dir;
    std::filesystem::path prompts_dir;
    double timeout_seconds = 60.0;
    int max_retries = 3;
    double retry_backoff_seconds = 1.0;
    /// Backend requests per minute; 0 disables the limit.
    double rate_limit_rpm = 60.0;
    std::string base_url = "https://api.openai.com";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string generation_model = "gpt-4";
    std::string embedding_model = "text-embedding-ada-002";
    std::size_t embedding_dim = 1536;
    std::optional<double> temperature;
    /// Texts longer than this many words are embedded chunk by chunk and the
    /// chunk vectors averaged with equal weights.
    std::size_t chunk_words = 2000;
    std::uint64_t mock_seed = 0;
    std::size_t mock_embedding_dim = 256;
    /// Fraction of replaceable words the mock paraphraser swaps.
    double mock_swap_rate = 1.0;
};

nlohmann::json to_json(const GatewayConfig& c);
GatewayConfig gateway_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

struct GatewayStats {
    std::uint64_t backend_requests = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t retries = 0;
};

/// Content-addressed store: one file per key plus a metadata sidecar.
/// Writers of the same key are serialised; a reader never sees a partial entry.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<std::string> get(const std::string& key);
    void put(const std::string& key, const std::string& value, const nlohmann::json& metadata);

    /// Looks the key up and otherwise runs `compute` exactly once across
    /// concurrent callers. `hit` reports whether the value came from the cache.
    template <typename F>
    std::string get_or_compute(const std::string& key, const nlohmann::json& metadata, F&& compute, bool& hit) {
        auto lock = key_lock(key);
        std::lock_guard guard(*lock);
        if (auto cached = get(key)) {
            hit = true;
            return *cached;
        }
        hit = false;
        std::string value = compute();
        put(key, value, metadata);
        return value;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::shared_ptr<std::mutex> key_lock(const std::string& key);

    std::filesystem::path dir_;
    std::mutex mutex_;
    std::unordered_map<std::string, std::string> memory_;
    std::unordered_map<std::string, std::shared_ptr<std::mutex>> locks_;
};

struct CacheSummary {
    std::size_t entries = 0;
    std::uintmax_t bytes = 0;
    std::map<std::string, std::size_t> by_kind;
};

CacheSummary cache_summary(const std::filesystem::path& dir);
/// Removes every cache entry and sidecar; returns the number of entries removed.
std::size_t clear_cache(const std::filesystem::path& dir);

class Gateway {
public:
    /// The thesaurus and tagger are only needed by the mock paraphraser.
    explicit Gateway(GatewayConfig config, std::shared_ptr<const Thesaurus> thesaurus = nullptr,
                     std::shared_ptr<const Tagger> tagger = nullptr);
    ~Gateway();

    std::string regenerate_review(std::string_view paper_text, Venue venue);
    std::string generate_review(std::string_view paper_text, Venue venue);
    std::string paraphrase_review(std::string_view review_text);
    EmbeddingVector embed_text(std::string_view text);

    /// Cache key of the regeneration for (paper_text, venue).
    std::string regeneration_key(std::string_view paper_text, Venue venue) const;

    std::string generation_model_id() const;
    std::string embedding_model_id() const;

    GatewayStats stats() const;
    const GatewayConfig& config() const { return config_; }

private:
    struct Remote;

    std::string complete(TemplateId id, std::string_view input);
    std::string completion_key(TemplateId id, std::string_view input) const;
    std::vector<double> embed_chunk(const std::string& chunk);
    std::string mock_complete(TemplateId id, std::string_view input) const;
    std::string mock_paraphrase(std::string_view input) const;
    std::vector<double> mock_embed(std::string_view input) const;
    void wait_for_rate_limit();

    GatewayConfig config_;
    std::map<TemplateId, PromptTemplate> prompts_;
    std::shared_ptr<const Thesaurus> thesaurus_;
    std::shared_ptr<const Tagger> tagger_;
    ResponseCache cache_;
    std::unique_ptr<Remote> remote_;

    std::atomic<std::uint64_t> backend_requests_{0};
    std::atomic<std::uint64_t> cache_hits_{0};
    std::atomic<std::uint64_t> cache_misses_{0};
    std::atomic<std::uint64_t> retries_{0};
    std::mutex rate_mutex_;
    std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace revguard
