#include <gtest/gtest.h>

#include "adaswitch/validate.hpp"

using namespace adaswitch::checks;

TEST(Validate, EverySuitePassesAtSmallScale) {
    ValidateOptions opt;
    opt.budget_seconds = 0;
    opt.min_checks = 15;
    for (const auto& s : run_validation("all", opt)) {
        EXPECT_TRUE(s.pass) << s.suite << '.' << s.name << ": " << s.counterexample;
        EXPECT_EQ(s.checked, 15);
    }
}

TEST(Validate, OffByOneInQFracIsCaught) {
    ValidateOptions opt;
    opt.budget_seconds = 0;
    opt.min_checks = 2000;
    opt.qfrac_offset = 1;
    bool caught = false;
    for (const auto& s : run_validation("oltq", opt))
        if (s.name == "qfrac_robustness") {
            caught = !s.pass;
            EXPECT_NE(s.counterexample.find("ell="), std::string::npos);
        }
    EXPECT_TRUE(caught);
}

TEST(Validate, UnknownSuiteThrows) {
    EXPECT_THROW(run_validation("nope", {}), std::invalid_argument);
}
