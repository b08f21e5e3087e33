#include <doctest.h>

#include "arbench/core.hpp"

using namespace arbench;

namespace {

TaskInstance sample_instance() {
    TaskInstance inst;
    inst.id = "abc123";
    inst.category = Category::BC;
    inst.sub_dataset = "chat_add_dataset";
    inst.variant = Variant::Raw;
    inst.question = "27 + 15817 =";
    inst.answer = "15844";
    inst.question_spans = {{0, 2, SpanKind::Operand},
                           {3, 4, SpanKind::Operator},
                           {5, 10, SpanKind::Operand},
                           {11, 12, SpanKind::Operator}};
    inst.seed = 7;
    return inst;
}

}  // namespace

TEST_CASE("a well-formed instance validates clean") {
    CHECK(validate_instance(sample_instance()).empty());
}

TEST_CASE("validation reports each violated invariant") {
    TaskInstance inst = sample_instance();
    inst.question.clear();
    auto violations = validate_instance(inst);
    REQUIRE_FALSE(violations.empty());
    bool found = false;
    for (const auto& v : violations)
        if (v == "question empty") found = true;
    CHECK(found);

    inst = sample_instance();
    inst.answer = std::string(5000, '1');
    LengthLimits limits;
    limits.max_answer = 4096;
    violations = validate_instance(inst, limits);
    CHECK(violations == std::vector<std::string>{"answer too long"});

    inst = sample_instance();
    inst.mapping_id = "deadbeef";  // raw + mapping id
    violations = validate_instance(inst);
    CHECK(violations == std::vector<std::string>{"variant/mapping_id mismatch"});

    inst = sample_instance();
    inst.variant = Variant::AllMap;  // mapped without mapping id
    violations = validate_instance(inst);
    CHECK(violations == std::vector<std::string>{"variant/mapping_id mismatch"});

    inst = sample_instance();
    inst.question_spans.push_back({100, 200, SpanKind::Operand});
    violations = validate_instance(inst);
    CHECK(violations == std::vector<std::string>{"question span out of range"});
}

TEST_CASE("json line round-trips and field order is stable") {
    TaskInstance inst = sample_instance();
    inst.examples.push_back({"1 + 1 =", "2", {{0, 1, SpanKind::Operand}}});
    inst.rule_text = "This is base 10 operation.";

    std::string line = instance_to_json_line(inst);
    CHECK(instance_from_json_line(line) == inst);
    CHECK(instance_to_json_line(instance_from_json_line(line)) == line);
    // Fixed field order for byte-stable output.
    CHECK(line.rfind("{\"id\":", 0) == 0);
    CHECK(line.find("\"category\":") < line.find("\"sub_dataset\":"));
    CHECK(line.find("\"question\":") < line.find("\"answer\":"));
    CHECK(line.find("\"mapping_id\":") < line.find("\"seed\":"));
}

TEST_CASE("mapped variant serializes its mapping id") {
    TaskInstance inst = sample_instance();
    inst.variant = Variant::NumMap;
    inst.mapping_id = "ff00ff00";
    std::string line = instance_to_json_line(inst);
    TaskInstance back = instance_from_json_line(line);
    CHECK(back.variant == Variant::NumMap);
    REQUIRE(back.mapping_id.has_value());
    CHECK(*back.mapping_id == "ff00ff00");
}

TEST_CASE("enum string round-trips") {
    for (Category c : {Category::BC, Category::EC, Category::NBR, Category::MA, Category::SMA,
                       Category::SR})
        CHECK(category_from_string(to_string(c)) == c);
    for (Variant v : {Variant::Raw, Variant::OpMap, Variant::NumMap, Variant::AllMap})
        CHECK(variant_from_string(to_string(v)) == v);
    CHECK_THROWS(category_from_string("XX"));
    CHECK_THROWS(variant_from_string("none"));
}
