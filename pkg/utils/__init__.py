# Utils package for the biliaison toolkit: text grammar, Hilbert series, input loading and stores
