#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "virasoro/diagnostics.hpp"

int main(int argc, char** argv) {
    vir::set_warnings_enabled(false);
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
