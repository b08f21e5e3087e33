#include "arbench/core.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace arbench {

using nlohmann::ordered_json;

std::string to_string(Category c) {
    switch (c) {
        case Category::BC: return "BC";
        case Category::EC: return "EC";
        case Category::NBR: return "NBR";
        case Category::MA: return "MA";
        case Category::SMA: return "SMA";
        case Category::SR: return "SR";
    }
    throw std::logic_error("bad category");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Raw: return "raw";
        case Variant::OpMap: return "op_map";
        case Variant::NumMap: return "num_map";
        case Variant::AllMap: return "all_map";
    }
    throw std::logic_error("bad variant");
}

Category category_from_string(std::string_view s) {
    if (s == "BC") return Category::BC;
    if (s == "EC") return Category::EC;
    if (s == "NBR") return Category::NBR;
    if (s == "MA") return Category::MA;
    if (s == "SMA") return Category::SMA;
    if (s == "SR") return Category::SR;
    throw std::invalid_argument("unknown category: " + std::string(s));
}

Variant variant_from_string(std::string_view s) {
    if (s == "raw") return Variant::Raw;
    if (s == "op_map") return Variant::OpMap;
    if (s == "num_map") return Variant::NumMap;
    if (s == "all_map") return Variant::AllMap;
    throw std::invalid_argument("unknown variant: " + std::string(s));
}

std::vector<std::string> validate_instance(const TaskInstance& inst, const LengthLimits& limits) {
    std::vector<std::string> violations;
    if (inst.id.empty()) violations.push_back("id empty");
    if (inst.question.empty()) violations.push_back("question empty");
    if (inst.answer.empty()) violations.push_back("answer empty");
    if (inst.question.size() > limits.max_question) violations.push_back("question too long");
    if (inst.answer.size() > limits.max_answer) violations.push_back("answer too long");
    if (inst.rule_text.size() > limits.max_rule) violations.push_back("rule_text too long");
    if ((inst.variant == Variant::Raw) != !inst.mapping_id.has_value())
        violations.push_back("variant/mapping_id mismatch");
    for (const auto& span : inst.question_spans) {
        if (span.begin >= span.end || span.end > inst.question.size()) {
            violations.push_back("question span out of range");
            break;
        }
    }
    for (const auto& ex : inst.examples) {
        if (ex.question.empty() || ex.answer.empty()) {
            violations.push_back("example with empty question or answer");
            break;
        }
        if (ex.question.size() > limits.max_question || ex.answer.size() > limits.max_answer) {
            violations.push_back("example too long");
            break;
        }
        if (ex.question == inst.question) {
            violations.push_back("example question equals task question");
            break;
        }
    }
    return violations;
}

namespace {

const char* span_kind_name(SpanKind k) {
    return k == SpanKind::Operand ? "operand" : "operator";
}

SpanKind span_kind_from(std::string_view s) {
    if (s == "operand") return SpanKind::Operand;
    if (s == "operator") return SpanKind::Operator;
    throw std::invalid_argument("unknown span kind: " + std::string(s));
}

ordered_json spans_to_json(const std::vector<Span>& spans) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : spans)
        arr.push_back(ordered_json::array({s.begin, s.end, span_kind_name(s.kind)}));
    return arr;
}

std::vector<Span> spans_from_json(const ordered_json& arr) {
    std::vector<Span> spans;
    for (const auto& item : arr) {
        spans.push_back({item.at(0).get<size_t>(), item.at(1).get<size_t>(),
                         span_kind_from(item.at(2).get<std::string>())});
    }
    return spans;
}

}  // namespace

std::string instance_to_json_line(const TaskInstance& inst) {
    ordered_json j;
    j["id"] = inst.id;
    j["category"] = to_string(inst.category);
    j["sub_dataset"] = inst.sub_dataset;
    j["variant"] = to_string(inst.variant);
    ordered_json examples = ordered_json::array();
    for (const auto& ex : inst.examples) {
        ordered_json e;
        e["question"] = ex.question;
        e["answer"] = ex.answer;
        e["question_spans"] = spans_to_json(ex.question_spans);
        examples.push_back(std::move(e));
    }
    j["examples"] = std::move(examples);
    j["rule_text"] = inst.rule_text;
    j["question"] = inst.question;
    j["answer"] = inst.answer;
    j["question_spans"] = spans_to_json(inst.question_spans);
    if (inst.mapping_id)
        j["mapping_id"] = *inst.mapping_id;
    else
        j["mapping_id"] = nullptr;
    j["seed"] = inst.seed;
    return j.dump();
}

TaskInstance instance_from_json_line(std::string_view line) {
    ordered_json j = ordered_json::parse(line);
    TaskInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.category = category_from_string(j.at("category").get<std::string>());
    inst.sub_dataset = j.at("sub_dataset").get<std::string>();
    inst.variant = variant_from_string(j.at("variant").get<std::string>());
    for (const auto& e : j.at("examples")) {
        Example ex;
        ex.question = e.at("question").get<std::string>();
        ex.answer = e.at("answer").get<std::string>();
        ex.question_spans = spans_from_json(e.at("question_spans"));
        inst.examples.push_back(std::move(ex));
    }
    inst.rule_text = j.at("rule_text").get<std::string>();
    inst.question = j.at("question").get<std::string>();
    inst.answer = j.at("answer").get<std::string>();
    inst.question_spans = spans_from_json(j.at("question_spans"));
    if (!j.at("mapping_id").is_null()) inst.mapping_id = j.at("mapping_id").get<std::string>();
    inst.seed = j.at("seed").get<uint64_t>();
    return inst;
}

void write_instances(const std::string& path, const std::vector<TaskInstance>& instances) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& inst : instances) out << instance_to_json_line(inst) << '\n';
}

std::vector<TaskInstance> read_instances(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<TaskInstance> instances;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        instances.push_back(instance_from_json_line(line));
    }
    return instances;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace arbench
