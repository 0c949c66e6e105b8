#include "derfun/tables.hpp"

#include "doctest.h"

using namespace derfun;

TEST_CASE("table cells") {
    CHECK(appendix_b_cell(3, 4, 1).group.to_string() == "Z/3");
    CHECK(appendix_b_cell(3, 8, 1).group == AbGroupType::cyclic(10));
    CHECK(appendix_b_cell(3, 8, 1).group.to_string() == "Z/10");
    CHECK(appendix_c_cell(1, 2, 1).group.to_string() == "Z/2");
    CHECK(appendix_c_cell(2, 2, 1).group == AbGroupType::cyclic(12));
    CHECK(appendix_b_cell(1, 0, 3).group == AbGroupType::free(3));
    CHECK(appendix_b_cell(2, 2, 2).group == AbGroupType::free(3));
    CHECK(appendix_b_cell(2, 3, 2).group.is_zero());
}

TEST_CASE("table engine tags") {
    CHECK(appendix_b_cell(2, 4, 1).engine == "closed-form");
    CHECK(appendix_b_cell(3, 3, 1).engine == "closed-form+koszul-cycles");
    CHECK(appendix_b_cell(5, 8, 1).engine == "closed-form+stable");
    // the one weight-5 cell outside the stable range and n - 2 != 1
    CHECK(appendix_b_cell(4, 10, 1).engine == "closed-form+dold-kan-integer+stable");
    CHECK(appendix_b_cell(4, 10, 1).group == AbGroupType::elementary(2, 2));
}

TEST_CASE("table ranges") {
    CHECK_THROWS_AS(appendix_b_cell(12, 0, 1), InputError);
    CHECK_THROWS_AS(appendix_b_cell(3, 11, 1), InputError);
    CHECK_THROWS_AS(appendix_c_cell(5, 0, 1), InputError);
    CHECK_THROWS_AS(appendix_c_cell(1, 13, 1), InputError);
}
