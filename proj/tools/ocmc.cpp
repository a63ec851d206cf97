#include <cstdio>
int main(){ std::puts("ocmc"); return 0; }
