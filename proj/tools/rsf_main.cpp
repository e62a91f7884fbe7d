#include "rsf/commands.hpp"

int main(int argc, char** argv) { return rsf::commands::run(argc, argv); }
