#include "tubegeo/cli.hpp"

int main(int argc, char** argv) { return tubegeo::run(argc, argv); }
