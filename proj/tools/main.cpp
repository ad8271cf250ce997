#include "emoaudionet/cli.hpp"

int main(int argc, char** argv) { return emoaudionet::cli::dispatch(argc, argv); }
