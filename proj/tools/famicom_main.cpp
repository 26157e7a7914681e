#include "famicom/cli.hpp"

int main(int argc, char** argv) {
    return famicom::run_cli(argc, argv);
}
