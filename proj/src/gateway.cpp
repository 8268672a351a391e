#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "revguard/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <thread>

#include "httplib.h"
#include "revguard/errors.hpp"
#include "revguard/house_style.hpp"
#include "revguard/io.hpp"
#include "revguard/random.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

constexpr std::string_view kSep = "\x1f";

struct TemplateName {
    TemplateId id;
    std::string_view name;
};

constexpr TemplateName kTemplateNames[] = {
    {TemplateId::REGEN_ICLR, "REGEN_ICLR"}, {TemplateId::REGEN_NEURIPS, "REGEN_NEURIPS"},
    {TemplateId::GEN_ICLR, "GEN_ICLR"},     {TemplateId::GEN_NEURIPS, "GEN_NEURIPS"},
    {TemplateId::PARAPHRASE, "PARAPHRASE"},
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool is_cache_key(std::string_view s) {
    return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

std::filesystem::path entry_path(const std::filesystem::path& dir, const std::string& key) {
    return dir / (key + ".txt");
}

std::filesystem::path meta_path(const std::filesystem::path& dir, const std::string& key) {
    return dir / (key + ".meta.json");
}

std::string serialize_vector(const std::vector<double>& v) {
    std::string out;
    char buf[40];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        out += buf;
    }
    return out;
}

std::vector<double> parse_vector(const std::string& s) {
    std::vector<double> v;
    const char* p = s.c_str();
    while (*p) {
        char* end = nullptr;
        const double x = std::strtod(p, &end);
        if (end == p) break;
        v.push_back(x);
        p = end;
        while (*p == '\n' || *p == ' ') ++p;
    }
    return v;
}

std::vector<std::string> chunk_words(std::string_view text, std::size_t per_chunk) {
    const auto words = text::split_words(text);
    if (per_chunk == 0 || words.size() <= per_chunk) return {std::string(text)};
    std::vector<std::string> chunks;
    for (std::size_t i = 0; i < words.size(); i += per_chunk) {
        std::string chunk;
        for (std::size_t j = i; j < std::min(words.size(), i + per_chunk); ++j) {
            if (!chunk.empty()) chunk += ' ';
            chunk += words[j];
        }
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

struct MockLayout {
    std::vector<std::string> headings;
    std::string closing;
};

MockLayout mock_layout(TemplateId id) {
    switch (id) {
        case TemplateId::REGEN_ICLR:
            return {{"Summary:", "Strong and weak points:", "Review summary:"},
                    "Recommendation: the points above support acceptance."};
        case TemplateId::REGEN_NEURIPS:
            return {{"Summary and contributions:", "Strengths and weaknesses:", "Questions and limitations:"},
                    "Recommendation: the points above support acceptance."};
        case TemplateId::GEN_ICLR:
            return {{"Summary of the paper:", "Main review:", "Summary of the review:"},
                    "Overall, I lean towards acceptance."};
        case TemplateId::GEN_NEURIPS:
            return {{"Summary:", "Strengths and weaknesses:", "Questions:", "Limitations:"},
                    "Overall, I lean towards acceptance."};
        case TemplateId::PARAPHRASE:
            break;
    }
    throw ArgumentError("template has no mock layout");
}

double unit_hash(std::string_view s, std::uint64_t seed) {
    return static_cast<double>(fnv1a64(s, seed) >> 11) * 0x1.0p-53;
}

bool has_inner_upper(std::string_view s) {
    return std::any_of(s.begin() + (s.empty() ? 0 : 1), s.end(),
                       [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool retryable_status(int status) { return status == 408 || status == 409 || status == 429 || status >= 500; }

}  // namespace

std::string_view to_string(TemplateId t) {
    for (const auto& n : kTemplateNames) {
        if (n.id == t) return n.name;
    }
    return "?";
}

std::string_view to_string(Backend b) { return b == Backend::MOCK ? "MOCK" : "REMOTE_API"; }

TemplateId parse_template_id(std::string_view s) {
    for (const auto& n : kTemplateNames) {
        if (n.name == s) return n.id;
    }
    throw ArgumentError("unknown template id: " + std::string(s));
}

Backend parse_backend(std::string_view s) {
    const std::string u = text::to_lower(s);
    if (u == "mock") return Backend::MOCK;
    if (u == "remote_api" || u == "remote") return Backend::REMOTE_API;
    throw ArgumentError("unknown backend: " + std::string(s));
}

TemplateId regeneration_template(Venue venue) {
    switch (venue) {
        case Venue::ICLR2022: return TemplateId::REGEN_ICLR;
        case Venue::NEURIPS2022: return TemplateId::REGEN_NEURIPS;
        case Venue::OTHER: break;
    }
    throw ArgumentError("venue OTHER has no regeneration template");
}

TemplateId generation_template(Venue venue) {
    switch (venue) {
        case Venue::ICLR2022: return TemplateId::GEN_ICLR;
        case Venue::NEURIPS2022: return TemplateId::GEN_NEURIPS;
        case Venue::OTHER: break;
    }
    throw ArgumentError("venue OTHER has no generation template");
}

PromptTemplate parse_prompt_template(TemplateId id, std::string_view body) {
    PromptTemplate t;
    t.id = id;
    std::string* section = nullptr;
    bool seen_system = false;
    bool seen_user = false;
    for (const auto& line : text::split(body, '\n')) {
        const auto trimmed = text::trim(line);
        if (trimmed == "## system") {
            section = &t.system_text;
            seen_system = true;
            continue;
        }
        if (trimmed == "## user") {
            section = &t.user_text;
            seen_user = true;
            continue;
        }
        if (section == nullptr) {
            if (text::is_blank(line)) continue;
            throw ConfigError("prompt template " + std::string(to_string(id)) + ": text before first section");
        }
        *section += line;
        *section += '\n';
    }
    if (!seen_system || !seen_user) {
        throw ConfigError("prompt template " + std::string(to_string(id)) + ": needs '## system' and '## user'");
    }
    auto strip = [](std::string& s) { s = std::string(text::trim(s)); };
    strip(t.system_text);
    strip(t.user_text);
    for (std::string_view ph : {"[paper text]", "[Review]"}) {
        if (t.user_text.find(ph) != std::string::npos) t.placeholder = ph;
    }
    return t;
}

std::map<TemplateId, PromptTemplate> load_prompt_registry(const std::filesystem::path& dir) {
    std::map<TemplateId, PromptTemplate> out;
    for (const auto& n : kTemplateNames) {
        const auto path = dir / (std::string(n.name) + ".txt");
        if (!std::filesystem::exists(path)) throw ConfigError("missing prompt template: " + path.string());
        out.emplace(n.id, parse_prompt_template(n.id, io::read_file(path)));
    }
    return out;
}

RenderedPrompt render_prompt(const PromptTemplate& t, std::string_view input) {
    if (t.placeholder.empty()) {
        throw ConfigError("prompt template " + std::string(to_string(t.id)) + " has no input placeholder");
    }
    RenderedPrompt r;
    r.system_text = t.system_text;
    r.user_text = t.user_text;
    const auto pos = r.user_text.find(t.placeholder);
    r.user_text.replace(pos, t.placeholder.size(), input);
    return r;
}

nlohmann::json to_json(const GatewayConfig& c) {
    nlohmann::json j;
    j["generation_backend"] = to_string(c.generation_backend);
    j["embedding_backend"] = to_string(c.embedding_backend);
    j["cache_dir"] = c.cache_dir.string();
    j["prompts_dir"] = c.prompts_dir.string();
    j["timeout_seconds"] = c.timeout_seconds;
    j["max_retries"] = c.max_retries;
    j["retry_backoff_seconds"] = c.retry_backoff_seconds;
    j["rate_limit_rpm"] = c.rate_limit_rpm;
    j["base_url"] = c.base_url;
    j["api_key_env"] = c.api_key_env;
    j["generation_model"] = c.generation_model;
    j["embedding_model"] = c.embedding_model;
    j["embedding_dim"] = c.embedding_dim;
    j["temperature"] = c.temperature ? nlohmann::json(*c.temperature) : nlohmann::json(nullptr);
    j["chunk_words"] = c.chunk_words;
    j["mock_seed"] = c.mock_seed;
    j["mock_embedding_dim"] = c.mock_embedding_dim;
    j["mock_swap_rate"] = c.mock_swap_rate;
    return j;
}

GatewayConfig gateway_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("gateway config must be a JSON object");
    static const std::set<std::string> known = {
        "generation_backend", "embedding_backend", "backend",     "cache_dir",      "prompts_dir",
        "timeout_seconds",    "max_retries",       "retry_backoff_seconds",          "rate_limit_rpm",
        "base_url",           "api_key_env",       "generation_model", "embedding_model", "embedding_dim",
        "temperature",        "chunk_words",       "mock_seed",   "mock_embedding_dim", "mock_swap_rate"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError("unknown gateway config key: " + k);
    }
    GatewayConfig c;
    auto path_of = [&](const std::string& key, std::filesystem::path& out) {
        if (!j.contains(key)) return;
        std::filesystem::path p = j.at(key).get<std::string>();
        if (!p.empty() && p.is_relative() && !base_dir.empty()) p = base_dir / p;
        out = p;
    };
    try {
        if (j.contains("backend")) {
            c.generation_backend = c.embedding_backend = parse_backend(j.at("backend").get<std::string>());
        }
        if (j.contains("generation_backend")) {
            c.generation_backend = parse_backend(j.at("generation_backend").get<std::string>());
        }
        if (j.contains("embedding_backend")) {
            c.embedding_backend = parse_backend(j.at("embedding_backend").get<std::string>());
        }
        path_of("cache_dir", c.cache_dir);
        path_of("prompts_dir", c.prompts_dir);
        c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
        c.max_retries = j.value("max_retries", c.max_retries);
        c.retry_backoff_seconds = j.value("retry_backoff_seconds", c.retry_backoff_seconds);
        c.rate_limit_rpm = j.value("rate_limit_rpm", c.rate_limit_rpm);
        c.base_url = j.value("base_url", c.base_url);
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.generation_model = j.value("generation_model", c.generation_model);
        c.embedding_model = j.value("embedding_model", c.embedding_model);
        c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
        if (j.contains("temperature") && !j.at("temperature").is_null()) {
            c.temperature = j.at("temperature").get<double>();
        }
        c.chunk_words = j.value("chunk_words", c.chunk_words);
        c.mock_seed = j.value("mock_seed", c.mock_seed);
        c.mock_embedding_dim = j.value("mock_embedding_dim", c.mock_embedding_dim);
        c.mock_swap_rate = j.value("mock_swap_rate", c.mock_swap_rate);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("gateway config: ") + e.what());
    }
    if (c.max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (c.timeout_seconds <= 0) throw ConfigError("timeout_seconds must be > 0");
    if (c.mock_embedding_dim == 0) throw ConfigError("mock_embedding_dim must be > 0");
    if (c.mock_swap_rate < 0 || c.mock_swap_rate > 1) throw ConfigError("mock_swap_rate must be in [0, 1]");
    return c;
}

std::optional<std::string> ResponseCache::get(const std::string& key) {
    {
        std::lock_guard guard(mutex_);
        auto it = memory_.find(key);
        if (it != memory_.end()) return it->second;
    }
    if (dir_.empty()) return std::nullopt;
    const auto path = entry_path(dir_, key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::string value = io::read_file(path);
    std::lock_guard guard(mutex_);
    memory_.emplace(key, value);
    return value;
}

void ResponseCache::put(const std::string& key, const std::string& value, const nlohmann::json& metadata) {
    if (!dir_.empty()) {
        std::filesystem::create_directories(dir_);
        io::write_file_atomic(meta_path(dir_, key), metadata.dump(2) + "\n");
        io::write_file_atomic(entry_path(dir_, key), value);
    }
    std::lock_guard guard(mutex_);
    memory_[key] = value;
}

std::shared_ptr<std::mutex> ResponseCache::key_lock(const std::string& key) {
    std::lock_guard guard(mutex_);
    auto& lock = locks_[key];
    if (!lock) lock = std::make_shared<std::mutex>();
    return lock;
}

CacheSummary cache_summary(const std::filesystem::path& dir) {
    CacheSummary s;
    if (!std::filesystem::is_directory(dir)) return s;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".txt") continue;
        const std::string key = e.path().stem().string();
        if (!is_cache_key(key)) continue;
        ++s.entries;
        s.bytes += e.file_size();
        std::string kind = "unknown";
        const auto meta = meta_path(dir, key);
        if (std::filesystem::exists(meta)) {
            s.bytes += std::filesystem::file_size(meta);
            try {
                kind = nlohmann::json::parse(io::read_file(meta)).value("kind", kind);
            } catch (const nlohmann::json::exception&) {
            }
        }
        ++s.by_kind[kind];
    }
    return s;
}

std::size_t clear_cache(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) return 0;
    std::vector<std::filesystem::path> doomed;
    std::size_t entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string name = e.path().filename().string();
        if (name.size() > 4 && name.ends_with(".txt") && is_cache_key(name.substr(0, name.size() - 4))) {
            doomed.push_back(e.path());
            ++entries;
        } else if (name.ends_with(".meta.json") && is_cache_key(name.substr(0, name.size() - 10))) {
            doomed.push_back(e.path());
        }
    }
    for (const auto& p : doomed) std::filesystem::remove(p);
    return entries;
}

struct Gateway::Remote {
    std::string host;
    std::string prefix;
    std::string api_key;
};

Gateway::Gateway(GatewayConfig config, std::shared_ptr<const Thesaurus> thesaurus, std::shared_ptr<const Tagger> tagger)
    : config_(std::move(config)),
      thesaurus_(std::move(thesaurus)),
      tagger_(std::move(tagger)),
      cache_(config_.cache_dir) {
    if (config_.prompts_dir.empty()) config_.prompts_dir = default_data_dir() / "prompts";
    prompts_ = load_prompt_registry(config_.prompts_dir);
    if (config_.generation_backend == Backend::REMOTE_API || config_.embedding_backend == Backend::REMOTE_API) {
        remote_ = std::make_unique<Remote>();
        const auto scheme = config_.base_url.find("://");
        if (scheme == std::string::npos) throw ConfigError("base_url needs a scheme: " + config_.base_url);
        const auto slash = config_.base_url.find('/', scheme + 3);
        remote_->host = config_.base_url.substr(0, slash);
        remote_->prefix = slash == std::string::npos ? "" : config_.base_url.substr(slash);
        while (!remote_->prefix.empty() && remote_->prefix.back() == '/') remote_->prefix.pop_back();
        if (remote_->prefix.empty()) remote_->prefix = "/v1";
        if (const char* key = std::getenv(config_.api_key_env.c_str())) remote_->api_key = key;
    }
}

Gateway::~Gateway() = default;

std::string Gateway::generation_model_id() const {
    if (config_.generation_backend == Backend::REMOTE_API) return config_.generation_model;
    char buf[96];
    std::snprintf(buf, sizeof buf, "mock-house-style-v1:seed=%llu:swap=%g",
                  static_cast<unsigned long long>(config_.mock_seed), config_.mock_swap_rate);
    return buf;
}

std::string Gateway::embedding_model_id() const {
    if (config_.embedding_backend == Backend::REMOTE_API) return config_.embedding_model;
    return "mock-hash-" + std::to_string(config_.mock_embedding_dim) + ":seed=" + std::to_string(config_.mock_seed);
}

GatewayStats Gateway::stats() const {
    return {backend_requests_.load(), cache_hits_.load(), cache_misses_.load(), retries_.load()};
}

std::string Gateway::completion_key(TemplateId id, std::string_view input) const {
    const auto& t = prompts_.at(id);
    std::string material = "complete";
    material += kSep;
    material += to_string(id);
    material += kSep;
    material += io::sha256_hex(t.system_text + std::string(kSep) + t.user_text);
    material += kSep;
    material += generation_model_id();
    material += kSep;
    material += config_.temperature ? std::to_string(*config_.temperature) : "default";
    material += kSep;
    material += input;
    return io::sha256_hex(material);
}

std::string Gateway::regeneration_key(std::string_view paper_text, Venue venue) const {
    return completion_key(regeneration_template(venue), paper_text);
}

void Gateway::wait_for_rate_limit() {
    if (config_.rate_limit_rpm <= 0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(60.0 / config_.rate_limit_rpm));
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard guard(rate_mutex_);
        slot = std::max(std::chrono::steady_clock::now(), next_slot_);
        next_slot_ = slot + interval;
    }
    std::this_thread::sleep_until(slot);
}

namespace {

nlohmann::json post_with_retries(const std::string& host, const std::string& path, const std::string& api_key,
                                 const nlohmann::json& body, const GatewayConfig& config,
                                 std::atomic<std::uint64_t>& retries) {
    httplib::Client client(host);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config.timeout_seconds));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (!api_key.empty()) client.set_bearer_token_auth(api_key);
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            ++retries;
            const double delay = config.retry_backoff_seconds * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw GatewayError(std::string("malformed backend response: ") + e.what());
            }
        }
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
        if (!retryable_status(res->status)) throw GatewayError(last_error);
    }
    throw GatewayError("backend request to " + path + " failed after " + std::to_string(config.max_retries + 1) +
                       " attempts: " + last_error);
}

}  // namespace

std::string Gateway::complete(TemplateId id, std::string_view input) {
    const RenderedPrompt prompt = render_prompt(prompts_.at(id), input);
    const std::string key = completion_key(id, input);
    nlohmann::json meta = {{"key", key},
                           {"kind", id == TemplateId::PARAPHRASE ? "paraphrase" : "completion"},
                           {"template", to_string(id)},
                           {"model_id", generation_model_id()},
                           {"backend", to_string(config_.generation_backend)},
                           {"temperature", config_.temperature ? nlohmann::json(*config_.temperature)
                                                               : nlohmann::json("backend default")},
                           {"created", utc_timestamp()}};
    bool hit = false;
    std::string out = cache_.get_or_compute(key, meta, [&]() -> std::string {
        ++backend_requests_;
        std::string text;
        if (config_.generation_backend == Backend::MOCK) {
            text = mock_complete(id, input);
        } else {
            wait_for_rate_limit();
            nlohmann::json body = {{"model", config_.generation_model},
                                   {"messages",
                                    {{{"role", "system"}, {"content", prompt.system_text}},
                                     {{"role", "user"}, {"content", prompt.user_text}}}}};
            if (config_.temperature) body["temperature"] = *config_.temperature;
            const auto res = post_with_retries(remote_->host, remote_->prefix + "/chat/completions",
                                               remote_->api_key, body, config_, retries_);
            try {
                text = res.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw GatewayError(std::string("unexpected completion response: ") + e.what());
            }
        }
        if (text::is_blank(text)) throw GatewayError("backend returned an empty completion");
        return text;
    }, hit);
    ++(hit ? cache_hits_ : cache_misses_);
    return out;
}

std::string Gateway::regenerate_review(std::string_view paper_text, Venue venue) {
    if (text::is_blank(paper_text)) throw ArgumentError("paper text is empty");
    return complete(regeneration_template(venue), paper_text);
}

std::string Gateway::generate_review(std::string_view paper_text, Venue venue) {
    if (text::is_blank(paper_text)) throw ArgumentError("paper text is empty");
    return complete(generation_template(venue), paper_text);
}

std::string Gateway::paraphrase_review(std::string_view review_text) {
    if (text::is_blank(review_text)) throw ArgumentError("review text is empty");
    return complete(TemplateId::PARAPHRASE, review_text);
}

std::vector<double> Gateway::embed_chunk(const std::string& chunk) {
    std::string material = "embed";
    material += kSep;
    material += embedding_model_id();
    material += kSep;
    material += chunk;
    const std::string key = io::sha256_hex(material);
    nlohmann::json meta = {{"key", key},
                           {"kind", "embedding"},
                           {"model_id", embedding_model_id()},
                           {"backend", to_string(config_.embedding_backend)},
                           {"created", utc_timestamp()}};
    bool hit = false;
    const std::string stored = cache_.get_or_compute(key, meta, [&]() -> std::string {
        ++backend_requests_;
        std::vector<double> v;
        if (config_.embedding_backend == Backend::MOCK) {
            v = mock_embed(chunk);
        } else {
            wait_for_rate_limit();
            nlohmann::json body = {{"model", config_.embedding_model}, {"input", chunk}};
            const auto res = post_with_retries(remote_->host, remote_->prefix + "/embeddings", remote_->api_key,
                                               body, config_, retries_);
            try {
                v = res.at("data").at(0).at("embedding").get<std::vector<double>>();
            } catch (const nlohmann::json::exception& e) {
                throw GatewayError(std::string("unexpected embedding response: ") + e.what());
            }
            if (config_.embedding_dim != 0 && v.size() != config_.embedding_dim) {
                throw GatewayError("embedding has dimension " + std::to_string(v.size()) + ", expected " +
                                   std::to_string(config_.embedding_dim));
            }
        }
        if (v.empty()) throw GatewayError("backend returned an empty embedding");
        for (double x : v) {
            if (!std::isfinite(x)) throw GatewayError("backend returned a non-finite embedding value");
        }
        return serialize_vector(v);
    }, hit);
    ++(hit ? cache_hits_ : cache_misses_);
    return parse_vector(stored);
}

EmbeddingVector Gateway::embed_text(std::string_view text) {
    if (text::is_blank(text)) throw ArgumentError("cannot embed empty text");
    const auto chunks = chunk_words(text, config_.chunk_words);
    EmbeddingVector out;
    out.model_id = embedding_model_id();
    for (const auto& chunk : chunks) {
        const auto v = embed_chunk(chunk);
        if (out.values.empty()) out.values.assign(v.size(), 0.0);
        if (v.size() != out.values.size()) throw GatewayError("chunk embeddings differ in dimension");
        for (std::size_t i = 0; i < v.size(); ++i) out.values[i] += v[i];
    }
    for (double& x : out.values) x /= static_cast<double>(chunks.size());
    return out;
}

std::string Gateway::mock_complete(TemplateId id, std::string_view input) const {
    if (id == TemplateId::PARAPHRASE) return mock_paraphrase(input);
    const auto layout = mock_layout(id);
    return style::house_review(style::extract_keywords(input, 4), layout.headings, layout.closing);
}

std::string Gateway::mock_paraphrase(std::string_view input) const {
    if (!thesaurus_ || !tagger_) throw ConfigError("the mock paraphraser needs a thesaurus and a tagger");
    std::vector<text::Replacement> swaps;
    for (const auto& tok : tagger_->tag(input)) {
        // Only uninflected content words, so that base-form synonyms fit.
        if (tok.tag != "NN" && tok.tag != "JJ" && tok.tag != "RB") continue;
        const auto pos = pos_class_of(tok.tag);
        if (has_inner_upper(tok.text)) continue;
        const std::string lower = text::to_lower(tok.text);
        if (style::is_stopword(lower)) continue;
        if (unit_hash(lower, config_.mock_seed) >= config_.mock_swap_rate) continue;
        const auto& syns = thesaurus_->synonyms(lower, *pos);
        const auto it = std::find_if(syns.begin(), syns.end(), [&](const std::string& s) { return s != lower; });
        if (it == syns.end()) continue;
        swaps.push_back({tok.offset, tok.text.size(), text::match_initial_case(tok.text, *it)});
    }
    const std::string swapped = text::apply_replacements(input, std::move(swaps));

    std::string out;
    const auto lines = text::split(swapped, '\n');
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (li > 0) out += '\n';
        const auto sentences = tokenize_sentences(line);
        if (sentences.size() < 2) {
            out += line;
            continue;
        }
        std::vector<std::size_t> starts;
        for (const auto& s : sentences) starts.push_back(s.front().offset);
        std::vector<std::string> pieces;
        for (std::size_t i = 0; i < starts.size(); ++i) {
            const std::size_t end = i + 1 < starts.size() ? starts[i + 1] : line.size();
            pieces.emplace_back(text::trim(std::string_view(line).substr(starts[i], end - starts[i])));
        }
        std::rotate(pieces.begin(), pieces.begin() + 1, pieces.end());
        out += line.substr(0, starts.front());
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (i > 0) out += ' ';
            out += pieces[i];
        }
    }
    return out;
}

std::vector<double> Gateway::mock_embed(std::string_view input) const {
    const std::size_t dim = config_.mock_embedding_dim;
    const auto words = style::words(input);
    std::map<std::string, std::size_t> counts;
    for (const auto& w : words) {
        if (!style::is_stopword(w)) ++counts[w];
    }
    if (counts.empty()) {
        for (const auto& w : words) ++counts[w];
    }
    if (counts.empty()) counts[std::string(input)] = 1;
    // Sublinear term weights keep a few repeated words from dominating.
    std::vector<double> v(dim, 0.0);
    for (const auto& [token, count] : counts) {
        const std::uint64_t h = fnv1a64(token, config_.mock_seed);
        v[h % dim] += ((h >> 63) ? -1.0 : 1.0) * (1.0 + std::log(static_cast<double>(count)));
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        v[0] = 1.0;
        norm = 1.0;
    }
    for (double& x : v) x /= norm;
    return v;
}

}  // namespace revguard
