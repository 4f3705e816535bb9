#include <doctest.h>

#include "support/properties.hpp"

namespace {

void require_passed(const props::Outcome& o, int expected_cases)
{
    INFO(o.first_failure);
    CHECK(o.cases >= expected_cases);
    CHECK(o.failures == 0);
}

} // namespace

TEST_CASE("derivations replay, reach the directly computed value and agree")
{
    require_passed(props::derivation_replay(), props::kCases);
}

TEST_CASE("parse and pretty round trip")
{
    require_passed(props::parse_pretty_round_trip(), props::kCases);
}

TEST_CASE("substitution matches the free-variable and nameless oracles")
{
    require_passed(props::substitution_oracle(), props::kCases);
}

TEST_CASE("partial sequence law on all small strategies")
{
    require_passed(props::partial_sequence_law(), props::kCases);
}

TEST_CASE("steps remaining counts down by one per step")
{
    require_passed(props::monotone_countdown(), props::kCases);
}

TEST_CASE("generators produce the intended shapes")
{
    gen::Source src(9);
    int lambdas = 0, lists = 0;
    for (int i = 0; i < 200; ++i) {
        auto e = gen::any_expr(src, 6);
        std::string text = stepwise::pretty(e);
        lambdas += text.find('\\') != std::string::npos;
        lists += text.find('[') != std::string::npos;
    }
    CHECK(lambdas > 10);
    CHECK(lists > 10);
    CHECK(props::counter_strategies(2).size() == 68);
}

TEST_CASE("the language comparison tells partial and plain sequence apart")
{
    auto pool = props::counter_strategies(2);
    int differ = 0;
    for (std::size_t i = 0; i < pool.size(); i += 3)
        for (std::size_t j = 0; j < pool.size(); j += 3)
            differ += counter::language(partial_sequence(pool[i], pool[j]), 1) !=
                      counter::language(sequence(pool[i], pool[j]), 1);
    CHECK(differ > 0);
}
