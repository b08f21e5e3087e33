#include "arbench/harness.hpp"

#include <atomic>
#include <chrono>
#include <cctype>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include <httplib.h>  // CPPHTTPLIB_OPENSSL_SUPPORT comes from the build

#include "arbench/rng.hpp"
#include "arbench/solver.hpp"

namespace arbench::eval {

using nlohmann::ordered_json;

// --- record io --------------------------------------------------------------

std::string record_to_json_line(const EvaluationRecord& rec) {
    ordered_json j;
    j["instance_id"] = rec.instance_id;
    j["model_name"] = rec.model_name;
    j["strategy"] = rec.strategy;
    j["prompt"] = rec.prompt;
    j["raw_output"] = rec.raw_output;
    if (rec.extracted_answer)
        j["extracted_answer"] = *rec.extracted_answer;
    else
        j["extracted_answer"] = nullptr;
    j["correct"] = rec.correct;
    j["grader"] = rec.grader;
    j["latency_ms"] = rec.latency_ms;
    j["timestamp"] = rec.timestamp;
    if (!rec.error.empty()) j["error"] = rec.error;
    return j.dump();
}

EvaluationRecord record_from_json_line(std::string_view line) {
    ordered_json j = ordered_json::parse(line);
    EvaluationRecord rec;
    rec.instance_id = j.at("instance_id").get<std::string>();
    rec.model_name = j.at("model_name").get<std::string>();
    rec.strategy = j.at("strategy").get<std::string>();
    rec.prompt = j.at("prompt").get<std::string>();
    rec.raw_output = j.at("raw_output").get<std::string>();
    if (!j.at("extracted_answer").is_null())
        rec.extracted_answer = j.at("extracted_answer").get<std::string>();
    rec.correct = j.at("correct").get<bool>();
    rec.grader = j.at("grader").get<std::string>();
    rec.latency_ms = j.at("latency_ms").get<double>();
    rec.timestamp = j.at("timestamp").get<std::string>();
    if (j.contains("error")) rec.error = j.at("error").get<std::string>();
    return rec;
}

void append_records(const std::string& path, const std::vector<EvaluationRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& rec : records) out << record_to_json_line(rec) << '\n';
}

std::vector<EvaluationRecord> read_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<EvaluationRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json_line(line));
    }
    return records;
}

// --- extraction & grading ---------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_markup(char c) { return c == '*' || c == '`' || c == '$' || c == '"' || c == '\''; }

// Strips emphasis/boxing decoration and one terminal period from a payload.
std::string strip_markup(std::string payload) {
    for (int pass = 0; pass < 4; ++pass) {
        payload = trim(payload);
        size_t boxed = payload.find("\\boxed{");
        if (boxed != std::string::npos) {
            size_t close = payload.find('}', boxed);
            if (close != std::string::npos)
                payload = payload.substr(boxed + 7, close - boxed - 7);
            continue;
        }
        bool changed = false;
        while (!payload.empty() && is_markup(payload.front())) {
            payload.erase(payload.begin());
            changed = true;
        }
        while (!payload.empty() && is_markup(payload.back())) {
            payload.pop_back();
            changed = true;
        }
        if (!payload.empty() && payload.back() == '.') {
            payload.pop_back();
            changed = true;
        }
        if (!changed) break;
    }
    return trim(payload);
}

// Payload runs to end of line, or to the first '.' that terminates a
// sentence (next char is whitespace or end). Decimal points survive.
std::string take_payload(std::string_view text, size_t from) {
    size_t end = from;
    while (end < text.size() && text[end] != '\n' && text[end] != '\r') {
        if (text[end] == '.' &&
            (end + 1 == text.size() ||
             std::isspace(static_cast<unsigned char>(text[end + 1]))))
            break;
        ++end;
    }
    return std::string(text.substr(from, end - from));
}

size_t find_last_ci(std::string_view haystack, std::string_view needle) {
    if (needle.size() > haystack.size()) return std::string_view::npos;
    for (size_t i = haystack.size() - needle.size() + 1; i-- > 0;) {
        bool hit = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
                std::tolower(static_cast<unsigned char>(needle[j]))) {
                hit = false;
                break;
            }
        }
        if (hit) return i;
    }
    return std::string_view::npos;
}

bool balanced_container(std::string_view s) {
    if (s.size() < 2) return false;
    return (s.front() == '[' && s.back() == ']') || (s.front() == '{' && s.back() == '}');
}

}  // namespace

std::optional<std::string> extract_answer(std::string_view raw_output) {
    constexpr std::string_view kScaffold = "the answer is";
    size_t scaffold_pos = find_last_ci(raw_output, kScaffold);
    size_t boxed_pos = raw_output.rfind("\\boxed{");

    std::string payload;
    if (scaffold_pos != std::string_view::npos &&
        (boxed_pos == std::string_view::npos || scaffold_pos > boxed_pos)) {
        size_t start = scaffold_pos + kScaffold.size();
        while (start < raw_output.size() && raw_output[start] == ' ') ++start;
        payload = take_payload(raw_output, start);
    } else if (boxed_pos != std::string_view::npos) {
        size_t close = raw_output.find('}', boxed_pos);
        if (close != std::string_view::npos)
            payload = std::string(raw_output.substr(boxed_pos + 7, close - boxed_pos - 7));
    } else {
        // Fallback: a final line that is a bare candidate token.
        size_t end = raw_output.find_last_not_of(" \t\r\n");
        if (end == std::string_view::npos) return std::nullopt;
        size_t begin = raw_output.find_last_of('\n', end);
        std::string last = trim(raw_output.substr(begin + 1, end - begin));
        last = strip_markup(last);
        if (last.empty()) return std::nullopt;
        bool bare = last.find(' ') == std::string::npos || balanced_container(last);
        if (!bare || last.size() > 256) return std::nullopt;
        return last;
    }
    payload = strip_markup(payload);
    if (payload.empty()) return std::nullopt;
    return payload;
}

namespace {

std::string normalize_for_grading(std::string_view s) {
    std::string collapsed;
    bool in_space = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !collapsed.empty()) collapsed.push_back(' ');
        in_space = false;
        collapsed.push_back(c);
    }
    return strip_markup(std::move(collapsed));
}

}  // namespace

bool grade(const std::optional<std::string>& extracted, std::string_view truth) {
    if (!extracted) return false;
    return normalize_for_grading(*extracted) == normalize_for_grading(truth);
}

// --- backends ---------------------------------------------------------------

namespace {

std::string wrap_answer(const std::string& answer) {
    return "Answer: The answer is " + answer + ".";
}

class PerfectBackend final : public Backend {
public:
    PerfectBackend(remap::SidecarIndex sidecars, std::string name)
        : sidecars_(std::move(sidecars)), name_(std::move(name)) {}

    std::string complete(const TaskInstance& inst, const std::string&) override {
        if (inst.variant == Variant::Raw) return wrap_answer(solve::solve(inst));
        auto it = sidecars_.find(inst.id);
        if (it == sidecars_.end())
            throw std::runtime_error("no sidecar mapping for instance " + inst.id);
        TaskInstance raw = remap::apply_map(inst, remap::invert(it->second));
        raw.variant = Variant::Raw;
        raw.mapping_id.reset();
        std::string raw_answer = solve::solve(raw);
        // Re-map the computed answer into the instance's symbol space.
        TaskInstance carrier = raw;
        carrier.answer = raw_answer;
        return wrap_answer(remap::apply_map(carrier, it->second).answer);
    }

    const std::string& model_name() const override { return name_; }

private:
    remap::SidecarIndex sidecars_;
    std::string name_;
};

class MemorizerBackend final : public Backend {
public:
    MemorizerBackend(const std::vector<TaskInstance>& raw_instances, std::string name)
        : name_(std::move(name)) {
        for (const auto& inst : raw_instances) table_[inst.question] = inst.answer;
    }

    std::string complete(const TaskInstance& inst, const std::string&) override {
        auto it = table_.find(inst.question);
        if (it == table_.end()) return "I don't know.";
        return wrap_answer(it->second);
    }

    const std::string& model_name() const override { return name_; }

private:
    std::unordered_map<std::string, std::string> table_;
    std::string name_;
};

class RandomBackend final : public Backend {
public:
    RandomBackend(const std::vector<TaskInstance>& instances, uint64_t seed, std::string name)
        : seed_(seed), name_(std::move(name)) {
        for (const auto& inst : instances) {
            auto& answers = answers_by_dataset_[inst.sub_dataset];
            if (std::find(answers.begin(), answers.end(), inst.answer) == answers.end())
                answers.push_back(inst.answer);
        }
    }

    std::string complete(const TaskInstance& inst, const std::string&) override {
        const auto& answers = answers_by_dataset_.at(inst.sub_dataset);
        SplitMix64 rng(seed_ ^ fnv1a64(inst.id));
        return wrap_answer(answers[rng.bounded(answers.size())]);
    }

    const std::string& model_name() const override { return name_; }

private:
    std::unordered_map<std::string, std::vector<std::string>> answers_by_dataset_;
    uint64_t seed_;
    std::string name_;
};

class HttpChatBackend final : public Backend {
public:
    explicit HttpChatBackend(BackendConfig config) : config_(std::move(config)) {
        if (config_.endpoint.empty()) throw FatalTransport("http backend needs an endpoint");
        split_endpoint();
    }

    std::string complete(const TaskInstance&, const std::string& prompt) override {
        ordered_json body;
        body["model"] = config_.model_name;
        body["messages"] = ordered_json::array(
            {ordered_json{{"role", "user"}, {"content", prompt}}});
        body["temperature"] = config_.params.temperature;
        body["max_tokens"] = config_.params.max_new_tokens;
        std::string payload = body.dump();

        long delay_ms = config_.retry_base_delay_ms;
        std::string last_error;
        bool reached_endpoint = false;
        for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
            auto result = post(payload);
            if (result) {
                reached_endpoint = true;
                if (result->status == 200) {
                    auto j = ordered_json::parse(result->body, nullptr, false);
                    if (!j.is_discarded() && j.contains("choices") && !j["choices"].empty())
                        return j["choices"][0]["message"]["content"].get<std::string>();
                    last_error = "malformed completion response";
                } else if (result->status == 401 || result->status == 403) {
                    throw FatalTransport("authentication rejected (HTTP " +
                                         std::to_string(result->status) + ")");
                } else if (result->status == 429 || result->status >= 500 ||
                           result->status == 408) {
                    last_error = "HTTP " + std::to_string(result->status);
                } else {
                    throw FatalTransport("unexpected HTTP status " +
                                         std::to_string(result->status));
                }
            } else {
                last_error = "connection failed: " + httplib::to_string(result.error());
            }
            if (attempt < kMaxAttempts) {
                std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
                delay_ms = std::min(delay_ms * 2, 8000L);
            }
        }
        // Transient server-side trouble stays a per-instance failure; an
        // endpoint that never answered is not going to serve the next
        // instance either.
        if (!reached_endpoint)
            throw FatalTransport("endpoint unreachable after " +
                                 std::to_string(kMaxAttempts) + " attempts: " + last_error);
        throw std::runtime_error("transport failed after " + std::to_string(kMaxAttempts) +
                                 " attempts: " + last_error);
    }

    const std::string& model_name() const override { return config_.model_name; }

private:
    static constexpr int kMaxAttempts = 5;

    void split_endpoint() {
        // Split "scheme://host[:port]/path" into origin + path.
        const std::string& url = config_.endpoint;
        size_t scheme = url.find("://");
        size_t path_pos = scheme == std::string::npos ? url.find('/')
                                                      : url.find('/', scheme + 3);
        if (path_pos == std::string::npos) {
            origin_ = url;
            path_ = "/v1/chat/completions";
        } else {
            origin_ = url.substr(0, path_pos);
            path_ = url.substr(path_pos);
        }
    }

    httplib::Result post(const std::string& payload) {
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
#ifdef ARBENCH_HAVE_OPENSSL
        if (origin_.rfind("https://", 0) == 0) {
            httplib::SSLClient client(origin_.substr(8));
            client.set_read_timeout(120, 0);
            return client.Post(path_, headers, payload, "application/json");
        }
#endif
        httplib::Client client(origin_);
        client.set_read_timeout(120, 0);
        return client.Post(path_, headers, payload, "application/json");
    }

    BackendConfig config_;
    std::string origin_;
    std::string path_;
};

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::unique_ptr<Backend> make_perfect_backend(remap::SidecarIndex sidecars,
                                              std::string model_name) {
    return std::make_unique<PerfectBackend>(std::move(sidecars), std::move(model_name));
}

std::unique_ptr<Backend> make_memorizer_backend(const std::vector<TaskInstance>& raw_instances,
                                                std::string model_name) {
    return std::make_unique<MemorizerBackend>(raw_instances, std::move(model_name));
}

std::unique_ptr<Backend> make_random_backend(const std::vector<TaskInstance>& instances,
                                             uint64_t seed, std::string model_name) {
    return std::make_unique<RandomBackend>(instances, seed, std::move(model_name));
}

std::unique_ptr<Backend> make_http_backend(const BackendConfig& config) {
    return std::make_unique<HttpChatBackend>(config);
}

// --- runner -----------------------------------------------------------------

std::vector<EvaluationRecord> run_evaluation(const std::vector<TaskInstance>& dataset,
                                             Backend& backend, const RunOptions& options) {
    if (options.concurrency < 1) throw std::invalid_argument("concurrency must be positive");

    std::unordered_set<std::string> done;
    std::vector<EvaluationRecord> records;
    if (options.resume && !options.records_path.empty()) {
        std::ifstream probe(options.records_path);
        if (probe.good()) {
            records = read_records(options.records_path);
            for (const auto& rec : records) done.insert(rec.instance_id);
        }
    }

    std::vector<const TaskInstance*> pending;
    for (const auto& inst : dataset)
        if (!done.count(inst.id)) pending.push_back(&inst);

    std::mutex write_mutex;
    std::ofstream out;
    if (!options.records_path.empty()) {
        out.open(options.records_path, std::ios::binary | std::ios::app);
        if (!out) throw std::runtime_error("cannot open for writing: " + options.records_path);
    }

    std::atomic<size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto worker = [&] {
        while (true) {
            {
                std::lock_guard lock(fatal_mutex);
                if (fatal) return;
            }
            size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            const TaskInstance& inst = *pending[i];

            EvaluationRecord rec;
            rec.instance_id = inst.id;
            rec.model_name = backend.model_name();
            rec.strategy = gen::to_string(options.strategy);
            rec.prompt = gen::assemble_prompt(inst, options.strategy);
            auto t0 = std::chrono::steady_clock::now();
            try {
                rec.raw_output = backend.complete(inst, rec.prompt);
            } catch (const FatalTransport&) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                return;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            auto t1 = std::chrono::steady_clock::now();
            rec.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            rec.timestamp = utc_timestamp();
            if (rec.error.empty()) {
                rec.extracted_answer = extract_answer(rec.raw_output);
                rec.correct = grade(rec.extracted_answer, inst.answer);
            }
            std::lock_guard lock(write_mutex);
            if (out.is_open()) {
                out << record_to_json_line(rec) << '\n';
                out.flush();
            }
            records.push_back(std::move(rec));
        }
    };

    std::vector<std::thread> threads;
    int n = std::min<int>(options.concurrency, static_cast<int>(pending.size()));
    threads.reserve(static_cast<size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (fatal) std::rethrow_exception(fatal);
    return records;
}

JudgeOutcome judge_grade(Backend& judge, const TaskInstance& inst,
                         const EvaluationRecord& record) {
    std::string prompt =
        "You are grading a model's answer against the ground truth.\n"
        "Question: " + inst.question + "\n"
        "Ground truth answer: " + inst.answer + "\n"
        "Model answer: " + record.extracted_answer.value_or("(none)") + "\n"
        "Reply with exactly one word, yes or no: is the model answer correct?\n";
    std::string verdict = judge.complete(inst, prompt);
    std::string lowered;
    for (char c : verdict) lowered.push_back(static_cast<char>(std::tolower(
        static_cast<unsigned char>(c))));
    JudgeOutcome outcome;
    outcome.correct = lowered.find("yes") != std::string::npos;
    outcome.agrees_with_exact = outcome.correct == record.correct;
    return outcome;
}

}  // namespace arbench::eval
