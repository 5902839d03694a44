#include "sphelim/acceptance.hpp"

#include <iostream>

int main()
{
    bool ok = true;
    for (const auto& criterion : sphelim::acceptance::all_criteria()) {
        const auto r = criterion();
        std::cout << sphelim::acceptance::format_line(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}
