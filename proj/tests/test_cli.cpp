#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qes/cli.hpp"

using namespace qes;
using cli::json;

namespace {

struct Invocation {
    int code;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

Invocation run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

bool has_float(const json &j) {
    if (j.is_number_float()) return true;
    if (j.is_structured())
        for (const auto &v : j)
            if (has_float(v)) return true;
    return false;
}

} // namespace

TEST(Cli, CheckPreserving) {
    Invocation r = run({"check", "--space", "V1(2,3,a)", "--op", "Jp(2,3,a)"});
    EXPECT_EQ(r.code, 0);
    json d = r.doc();
    EXPECT_EQ(d["status"], "true");
    EXPECT_EQ(d["exit_code"], 0);
    EXPECT_TRUE(d["witnesses"].empty());
    EXPECT_EQ(d["normal_forms"]["op"], make_bosonic(2, 3, param_a()).plus.to_string());
}

TEST(Cli, CheckWitness) {
    Invocation r = run({"check", "--space", "V1(1,1,a)", "--op", "d"});
    EXPECT_EQ(r.code, 1);
    json d = r.doc();
    EXPECT_EQ(d["status"], "false");
    ASSERT_EQ(d["witnesses"].size(), 1u);
    EXPECT_EQ(d["witnesses"][0]["basis"], "a");
    EXPECT_EQ(d["witnesses"][0]["output"], "a-1");
    EXPECT_EQ(d["witnesses"][0]["coefficient"], "a");
}

TEST(Cli, FitCubic) {
    Invocation r = run({"fit", "--space", "V1(1,1,a)", "--op", "comm(Jp(1,1,a),Jm(1,1,a))", "--in", "J0(1,1,a)", "--maxdeg", "3"});
    EXPECT_EQ(r.code, 0);
    json d = r.doc();
    // independent sympy fit of [J+, J-] on V1(1,1,a)
    EXPECT_EQ(d["result"]["coefficients"], json({"-2*a^2+9/2*a-1", "-2*a^2+12*a-9", "6*a-12", "-4"}));
}

TEST(Cli, FitFailureIsFalse) {
    Invocation r = run({"fit", "--space", "V1(2,2,a)", "--op", "acomm(Q(2,2,0),Qbar(2,2,0))", "--in", "J0(2,2,a)", "--maxdeg", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.doc()["witnesses"].size(), 1u);
    Invocation raised = run({"fit", "--space", "V1(2,2,a)", "--op", "acomm(Q(2,2,0),Qbar(2,2,0))", "--in", "J0(2,2,a)", "--maxdeg", "1",
                      "--auto-raise"});
    EXPECT_EQ(raised.code, 0);
    EXPECT_EQ(raised.doc()["result"]["degree"], 4);
    EXPECT_EQ(raised.doc()["result"]["warnings"].size(), 3u);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"check", "--op", "d"}).code, 2);
    EXPECT_EQ(run({"--format", "yaml", "check", "--space", "P(1)", "--op", "d"}).code, 2);
    EXPECT_EQ(run({"search", "--space", "P(1)", "--deg", "1"}).code, 2);
    EXPECT_EQ(run({"fit", "--space", "SqrtP2(1,lambda)", "--op", "d", "--in", "D"}).code, 2);
}

TEST(Cli, ParseErrorReport) {
    Invocation r = run({"check", "--space", "V1(1,1,a)", "--op", "d*(x"});
    EXPECT_EQ(r.code, 2);
    json d = r.doc();
    EXPECT_EQ(d["status"], "error");
    EXPECT_EQ(d["error"]["position"], 4);
    EXPECT_NE(r.err.find("parse error at 4"), std::string::npos);
    EXPECT_EQ(run({"check", "--space", "V1(1,1", "--op", "d"}).code, 2);
    EXPECT_EQ(run({"lame", "--n", "1", "--k2", "1"}).code, 2);
}

TEST(Cli, Subcommands) {
    Invocation c = run({"comm", "--op1", "d", "--op2", "x"});
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.doc()["normal_forms"]["commutator"], "(1)");

    Invocation onspace = run({"comm", "--op1", "Q(2,2,0)", "--op2", "D", "--space", "V1(2,2,a)"});
    EXPECT_EQ(onspace.code, 0);
    EXPECT_EQ(onspace.doc()["result"]["zero_on_space"], false);

    Invocation cl = run({"closure", "--space", "P(3)", "--gens", "jp(3), j0(3), jm(3)"});
    EXPECT_EQ(cl.code, 0);
    EXPECT_EQ(cl.doc()["result"]["closure"]["classification"], "sl(2,R)");
    EXPECT_EQ(cl.doc()["result"]["closure"]["killing"]["signature"], json({2, 1, 0}));

    Invocation open = run({"closure", "--space", "V1(1,1,a)", "--gens", "Jp(1,1,a),J0(1,1,a),Jm(1,1,a)"});
    EXPECT_EQ(open.code, 1);

    Invocation s = run({"search", "--space", "V1(2,2,a)", "--max-order", "2", "--deg", "-1:1"});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(s.doc()["result"]["rechecks"].size(), 2u);

    Invocation l = run({"lame", "--n", "2", "--k2", "1/2", "--spectrum"});
    EXPECT_EQ(l.code, 0);
    EXPECT_EQ(l.doc()["result"]["real_distinct_roots"], 5);

    Invocation cat = run({"catalog", "--space", "V1(1,3,a)"});
    EXPECT_EQ(cat.code, 0);
    bool saw_qbar = false;
    const json gens = cat.doc()["result"]["generators"];
    for (const auto &g : gens) {
        if (g["name"] == "Qbar(1,3,2)") saw_qbar = true;
        if (g["name"].get<std::string>().rfind("Jp", 0) == 0) {
            EXPECT_TRUE(g["invariant"].get<bool>());
        }
    }
    EXPECT_TRUE(saw_qbar);
}

TEST(Cli, NoFloatsAnywhere) {
    const std::vector<std::vector<std::string>> corpus{
        {"check", "--space", "V1(1,1,a)", "--op", "d"},
        {"fit", "--space", "V1(1,1,a)", "--op", "comm(Jp(1,1,a),Jm(1,1,a))", "--in", "J0(1,1,a)"},
        {"closure", "--space", "SqrtP2(1,lambda)", "--gens", "S3(),f*(x*d-1),(1-x)*(1-lambda*x)*d-lambda*x"},
        {"lame", "--n", "1", "--k2", "1/4", "--spectrum"},
        {"catalog", "--space", "Lame(2,k2)"}};
    for (const auto &args : corpus) {
        Invocation r = run(args);
        EXPECT_FALSE(has_float(r.doc())) << args[0];
        EXPECT_EQ(r.doc()["schema_version"], cli::schema_version);
    }
}

TEST(Cli, DeterministicApartFromTiming) {
    std::vector<std::string> args{"closure", "--space", "P(2)", "--gens", "jp(2),j0(2),jm(2)"};
    json a = run(args).doc(), b = run(args).doc();
    a.erase("timing");
    b.erase("timing");
    EXPECT_EQ(a, b);
}

TEST(Cli, FormatEnvironmentAndOut) {
    ::setenv("QES_FORMAT", "text", 1);
    Invocation t = run({"check", "--space", "V1(1,1,a)", "--op", "d"});
    EXPECT_EQ(t.code, 1);
    EXPECT_EQ(t.out.rfind("qes check", 0), 0u);
    EXPECT_NE(t.out.find("status: false"), std::string::npos);
    EXPECT_NE(t.out.find("output a-1"), std::string::npos);
    Invocation j = run({"--format", "json", "check", "--space", "V1(1,1,a)", "--op", "d"});
    EXPECT_NO_THROW(j.doc());
    ::unsetenv("QES_FORMAT");

    const std::string path = ::testing::TempDir() + "qes_report.json";
    Invocation f = run({"check", "--space", "P(2)", "--op", "jp(2)", "--out", path});
    EXPECT_EQ(f.code, 0);
    EXPECT_TRUE(f.out.empty());
    std::ifstream in(path);
    json d = json::parse(in);
    EXPECT_EQ(d["status"], "true");
    std::remove(path.c_str());
}
