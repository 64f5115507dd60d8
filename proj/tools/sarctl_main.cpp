#include "sar/cli.hpp"

int main(int argc, char** argv) { return sar::sarctl_main(argc, argv); }
