// No floating-point type or function may appear in library, CLI or tool code.

#include "support/float_lint.hpp"

#include <gtest/gtest.h>

TEST(Exactness, NoFloatingPointInCorePaths) {
    auto r = support::float_lint(SNCTROP_SOURCE_DIR);
    for (const auto& f : r.findings) ADD_FAILURE() << f;
    EXPECT_GT(r.files, 10u);
}

TEST(Exactness, LintCatchesFloats) {
    const auto& re = support::float_pattern();
    EXPECT_TRUE(std::regex_search(support::strip_comments("double x = 1;"), re));
    EXPECT_TRUE(std::regex_search(support::strip_comments("#include <cmath>"), re));
    EXPECT_TRUE(std::regex_search(support::strip_comments("auto y = std::sqrt(2);"), re));
    EXPECT_FALSE(std::regex_search(support::strip_comments("// double\nint x; /* float */ auto s = \"double\";"), re));
    EXPECT_FALSE(std::regex_search(support::strip_comments("int doubled = 2;"), re));
}
