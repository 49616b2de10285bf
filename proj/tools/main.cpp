#include "plugaudit/cli.hpp"

int main(int argc, char** argv) {
    return plugaudit::cli_main(argc, argv);
}
