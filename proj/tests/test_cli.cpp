#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "stepwise/cli.hpp"
#include "stepwise/parser.hpp"
#include "support/golden.hpp"

using namespace stepwise;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "")
{
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

const std::string kPrelude = STEPWISE_DATA_DIR "/prelude.hs";
const std::string kStandard = STEPWISE_DATA_DIR "/standard.hs";
const std::string kScript = STEPWISE_DATA_DIR "/feedback.script";

bool contains(const std::string& text, const std::string& part)
{
    return text.find(part) != std::string::npos;
}

} // namespace

TEST_CASE("derive prints the textbook layout")
{
    Run r = run({"derive", "sum ([3,7] ++ [5])", "--strategy", "outermost"});
    CHECK(r.code == exit_code::ok);
    CHECK(oracle::squeeze(r.out) == oracle::squeeze(golden::read("running_example_outermost.txt")));
    CHECK(contains(r.out, "= { definition foldl }\n"));
    CHECK(contains(r.out, "\n  foldl (+) 0 [3,7,5]\n") == false);

    Run inner = run({"derive", "sum ([3,7] ++ [5])", "-s", "innermost"});
    CHECK(oracle::squeeze(inner.out) == oracle::squeeze(golden::read("running_example_innermost.txt")));
    CHECK(contains(inner.out, "\n  foldl (+) 0 [3,7,5]\n"));
}

TEST_CASE("derive output is identical across runs")
{
    Run a = run({"derive", "sum ([3,7] ++ [5])", "-s", "innermost"});
    Run b = run({"derive", "sum ([3,7] ++ [5])", "-s", "innermost"});
    CHECK(a.out == b.out);
}

TEST_CASE("derive of a value prints just the value")
{
    Run r = run({"derive", "15"});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out == "  15\n");
}

TEST_CASE("numbered steps")
{
    Run r = run({"derive", "1 + 2", "--numbered"});
    CHECK(r.out == "  1 + 2\n= { applying + }  -- step 1\n  3\n");
}

TEST_CASE("derive with a prelude")
{
    Run r = run({"derive", "sum'' [1,2]", "--prelude", kPrelude});
    CHECK(r.code == exit_code::ok);
    CHECK(contains(r.out, "= { definition sum'' }"));
    CHECK(r.out.substr(r.out.size() - 4) == "  3\n");

    Run generated = run({"derive", "sum ([3,7] ++ [5])", "--no-builtins", "--prelude", kStandard});
    CHECK(generated.code == exit_code::ok);
    CHECK(oracle::squeeze(generated.out) == oracle::squeeze(golden::read("running_example_outermost.txt")));
}

TEST_CASE("exit codes")
{
    CHECK(run({"derive", "sum (1 +"}).code == exit_code::usage_or_parse);
    CHECK(run({"derive"}).code == exit_code::usage_or_parse);
    CHECK(run({}).code == exit_code::usage_or_parse);
    CHECK(run({"derive", "1", "--strategy", "lazy"}).code == exit_code::usage_or_parse);
    CHECK(run({"derive", "1", "--prelude", "/nonexistent.hs"}).code == exit_code::usage_or_parse);

    Run stuck = run({"derive", "foldl (+) 0 5"});
    CHECK(stuck.code == exit_code::evaluation);
    CHECK(contains(stuck.err, "stuck"));

    Run runaway = run({"derive", "head (1 : loop)", "-s", "innermost", "--prelude", kPrelude});
    CHECK(runaway.code == exit_code::evaluation);
    CHECK(run({"derive", "sum ([3,7] ++ [5])", "--budget", "3"}).code == exit_code::evaluation);
}

TEST_CASE("the budget can come from the environment")
{
    setenv("STEPWISE_BUDGET", "3", 1);
    int code = run({"derive", "sum ([3,7] ++ [5])"}).code;
    unsetenv("STEPWISE_BUDGET");
    CHECK(code == exit_code::evaluation);
    CHECK(run({"derive", "sum ([3,7] ++ [5])"}).code == exit_code::ok);
}

TEST_CASE("compare shows both strategies side by side")
{
    Run r = run({"compare", "sum ([3,7] ++ [5])"});
    CHECK(r.code == exit_code::ok);
    CHECK(contains(r.out, "innermost: 11 steps, result 15"));
    CHECK(contains(r.out, "outermost: 11 steps, result 15"));
    // Step 3 shows the fully evaluated list on the innermost side only.
    std::istringstream lines(r.out);
    std::string line;
    bool found = false;
    while (std::getline(lines, line))
        if (line.rfind("4 ", 0) == 0) {
            found = true;
            CHECK(contains(line, "foldl (+) 0 [3,7,5]"));
            CHECK(contains(line, "foldl (+) (0 + 3) (7 : ([] ++ [5]))"));
        }
    CHECK(found);

    Run zero = run({"compare", "0"});
    CHECK(contains(zero.out, "innermost: 0 steps, result 0"));
    CHECK(contains(zero.out, "outermost: 0 steps, result 0"));

    Run dbl = run({"compare", "double (1+2)", "--prelude", kPrelude});
    CHECK(contains(dbl.out, "innermost: 3 steps, result 6"));
    CHECK(contains(dbl.out, "outermost: 4 steps, result 6"));

    Run half = run({"compare", "head (1 : loop)", "--prelude", kPrelude, "--budget", "200"});
    CHECK(half.code == exit_code::evaluation);
    CHECK(contains(half.out, "outermost: 1 step, result 1"));
}

TEST_CASE("practice session")
{
    std::string input =
        ":hint\n"
        "foldl (+) 0 ([3,7] ++ [5])\n"
        "foldl (+) 1 ([3,7] ++ [5])\n"
        ":steps\n"
        "foldl (+ 0\n"
        ":quit\n";
    Run r = run({"practice", "sum ([3,7] ++ [5])", "--script", kScript}, input);
    CHECK(r.code == exit_code::ok);
    CHECK(contains(r.out, "Practising with the outermost strategy; 11 steps to go."));
    CHECK(contains(r.out, "Hint: "));
    CHECK(contains(r.out, "(definition sum)"));
    CHECK(contains(r.out, "Correct — definition sum (10 steps remaining)"));
    CHECK(contains(r.out, "Incorrect."));
    CHECK(contains(r.out, "Permitted next steps:\n  - foldl (+) 0 (3 : ([7] ++ [5]))"));
    CHECK(contains(r.out, "10 steps remaining\n"));
    CHECK(contains(r.out, "Parse error: "));
    CHECK(contains(r.out, "Stopped after 1 step."));
}

TEST_CASE("the hint at the start uses the description without a script")
{
    Run r = run({"practice", "sum ([3,7] ++ [5])"}, ":hint\n:quit\n");
    CHECK(contains(r.out, "Hint: Calculate the sum of a list of numbers (definition sum)"));
}

TEST_CASE("practice to the end")
{
    Run r = run({"practice", "(1 + 2) + 3", "-s", "innermost"}, "3 + 3\n6\n");
    CHECK(r.code == exit_code::ok);
    CHECK(contains(r.out, "Correct — applying + (1 step remaining)"));
    CHECK(contains(r.out, "Done: fully evaluated after 2 steps."));
}

TEST_CASE("diagnose from the command line")
{
    Run ok = run({"diagnose", "sum ([3,7] ++ [5])", "foldl (+) 0 ([3,7] ++ [5])"});
    CHECK(ok.code == exit_code::ok);
    CHECK(contains(ok.out, "CorrectStep: eval.sum.rule"));
    CHECK(contains(ok.out, "10 steps remaining"));

    Run fused = run({"diagnose", "foldl (+) 0 (3 : ([7] ++ [5]))", "foldl (+) 3 ([7] ++ [5])"});
    CHECK(contains(fused.out, "EquivalentButOffStrategy"));

    Run wrong = run({"diagnose", "foldl (+) 0 ([3,7] ++ [5])", "foldl (+) 1 ([3,7] ++ [5])"});
    CHECK(contains(wrong.out, "Incorrect"));
    CHECK(contains(wrong.out, "permitted: foldl (+) 0 (3 : ([7] ++ [5]))"));

    CHECK(run({"diagnose", "1 + 2", "(3"}).code == exit_code::usage_or_parse);
}
